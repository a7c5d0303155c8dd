#include "xtpn/state.hpp"

#include <stdexcept>

#include "xtpn/rng.hpp"

namespace xtpn {

GridSampler::GridSampler(std::uint64_t seed, std::int64_t resolution, Rat horizon_cap)
    : seed_(seed), resolution_(resolution), horizon_cap_(std::move(horizon_cap)) {
  if (resolution_ < 1) throw std::invalid_argument("resolution must be >= 1");
  if (horizon_cap_.is_infinite()) throw std::invalid_argument("horizon cap must be finite");
}

Rat GridSampler::draw(const Rat& low, const Rat& high, std::uint64_t key) const {
  const Rat effective_high = high.is_infinite() ? low + horizon_cap_ : high;
  const std::int64_t choices = (effective_high - low).floor_scaled(resolution_) + 1;
  const std::int64_t k = std::int64_t(bounded_uniform(key, std::uint64_t(choices)));
  return low + Rat(k, resolution_);
}

Rat GridSampler::alpha_deadline(const XtpnNet& net, std::size_t t, std::uint64_t episode) {
  const TransitionSpec& spec = net.transitions()[t];
  return draw(spec.alpha_low, spec.alpha_high, mix_key({seed_, std::uint64_t(t), episode, 0xA}));
}

Rat GridSampler::beta_deadline(const XtpnNet& net, std::size_t t, std::uint64_t episode) {
  const TransitionSpec& spec = net.transitions()[t];
  return draw(spec.beta_low, spec.beta_high, mix_key({seed_, std::uint64_t(t), episode, 0xB}));
}

FixedSampler::FixedSampler(std::vector<Rat> alpha, std::vector<Rat> beta)
    : alpha_(std::move(alpha)), beta_(std::move(beta)) {}

Rat FixedSampler::alpha_deadline(const XtpnNet&, std::size_t t, std::uint64_t) {
  return alpha_.at(t);
}

Rat FixedSampler::beta_deadline(const XtpnNet&, std::size_t t, std::uint64_t) {
  return beta_.at(t);
}

TransitionTimer TransitionTimer::active(Rat deadline) {
  TransitionTimer timer;
  timer.phase = Phase::Active;
  timer.clock = Rat(0);
  timer.deadline = std::move(deadline);
  return timer;
}

bool is_active(const XtpnNet& net, const Marking& m, std::size_t t) {
  const auto covered = [&](const ArcRef& a) {
    return std::int64_t(mature_count(m.bag(a.place), net.places()[a.place].gamma_low)) >= a.weight;
  };
  for (const ArcRef& a : net.normal_inputs(t)) {
    if (!covered(a)) return false;
  }
  for (const ArcRef& a : net.read_inputs(t)) {
    if (!covered(a)) return false;
  }
  for (const ArcRef& a : net.inhibitors(t)) {
    if (covered(a)) return false;  // blocking subset present
  }
  return true;
}

namespace {

void activate(const XtpnNet& net, NetState& z, std::size_t t, DeadlineSampler& sampler) {
  z.timers[t] = TransitionTimer::active(sampler.alpha_deadline(net, t, z.alpha_episode[t]));
  z.alpha_episode[t] += 1;
}

}  // namespace

void reevaluate_activations(const XtpnNet& net, NetState& z, DeadlineSampler& sampler) {
  for (std::size_t t = 0; t < z.timers.size(); ++t) {
    if (z.timers[t].is_producing()) continue;
    const bool active_now = is_active(net, z.marking, t);
    if (!active_now) {
      z.timers[t] = TransitionTimer::inactive();
    } else if (!z.timers[t].is_active()) {
      activate(net, z, t, sampler);
    }
  }
}

NetState initial_state(const XtpnNet& net, DeadlineSampler& sampler) {
  NetState z;
  z.marking = Marking::initial(net);
  z.timers.assign(net.transitions().size(), TransitionTimer::inactive());
  z.now = Rat(0);
  z.alpha_episode.assign(net.transitions().size(), 0);
  z.beta_episode.assign(net.transitions().size(), 0);
  reevaluate_activations(net, z, sampler);
  return z;
}

NetState elapse(const XtpnNet& net, const NetState& z, const Rat& tau, DeadlineSampler& sampler) {
  NetState out = z;
  out.marking = age_marking(z.marking, tau);
  out.now = z.now + tau;
  for (std::size_t t = 0; t < out.timers.size(); ++t) {
    TransitionTimer& timer = out.timers[t];
    if (timer.phase == TransitionTimer::Phase::Producing) {
      timer.clock += tau;
      continue;
    }
    const bool active_now = is_active(net, out.marking, t);
    if (!active_now) {
      timer = TransitionTimer::inactive();
    } else if (timer.is_active()) {
      timer.clock += tau;
    } else {
      activate(net, out, t, sampler);
    }
  }
  return out;
}

NetState start_production(const XtpnNet& net, const NetState& z, std::size_t t,
                          DeadlineSampler& sampler, const ModeConfig& mode) {
  const TransitionTimer& timer = z.timers[t];
  if (!timer.is_active() || timer.clock != timer.deadline) {
    throw std::logic_error("production start outside the activation deadline");
  }
  if (!is_active(net, z.marking, t)) {
    throw std::logic_error("production start of an inactive transition");
  }
  NetState out = z;
  const std::uint64_t draw_key = mix_key({std::uint64_t(t), z.beta_episode[t]});
  const Marking consumed =
      build_consume_set(net, z.marking, t, mode.removal, mode.read_arc_mode, draw_key);
  out.marking = m_subtract(z.marking, consumed);

  TransitionTimer producing;
  producing.phase = TransitionTimer::Phase::Producing;
  producing.clock = Rat(0);
  producing.deadline = sampler.beta_deadline(net, t, z.beta_episode[t]);
  out.beta_episode[t] += 1;
  if (mode.read_arc_mode != ReadArcMode::NotConsumed) {
    for (const ArcRef& a : net.read_inputs(t)) {
      producing.held_read.emplace_back(a.place, consumed.bag(a.place).elements());
    }
  }
  out.timers[t] = std::move(producing);

  reevaluate_activations(net, out, sampler);
  return out;
}

NetState end_production(const XtpnNet& net, const NetState& z, std::size_t t,
                        DeadlineSampler& sampler, const ModeConfig& mode) {
  const TransitionTimer& timer = z.timers[t];
  if (!timer.is_producing() || timer.clock != timer.deadline) {
    throw std::logic_error("production end outside the production deadline");
  }
  NetState out = z;
  Marking produced = build_produce_set(net, t, mode.read_arc_mode);
  if (mode.read_arc_mode == ReadArcMode::ConsumedAged) {
    for (const auto& [place, lifetimes] : timer.held_read) {
      const Rat& bound = net.places()[place].gamma_high;
      for (const Rat& life : lifetimes) {
        const Rat aged = life + timer.deadline;
        if (aged <= bound) produced.bag(place).insert(aged);
      }
    }
  }
  out.marking = m_add(z.marking, produced);
  out.timers[t] = TransitionTimer::inactive();
  reevaluate_activations(net, out, sampler);
  return out;
}

}  // namespace xtpn
