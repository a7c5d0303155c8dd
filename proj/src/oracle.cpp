#include "xtpn/oracle.hpp"

#include <stdexcept>

#include "xtpn/bag.hpp"
#include "xtpn/rng.hpp"

namespace xtpn {

namespace {

struct OracleTimer {
  enum class Phase { Inactive, Active, Producing };
  Phase phase = Phase::Inactive;
  Rat clock;
  Rat deadline;
  std::vector<std::pair<std::size_t, std::vector<Rat>>> held_read;
};

struct OracleState {
  Marking marking;
  std::vector<OracleTimer> timers;
  Rat now;
  std::vector<std::uint64_t> beta_episode;
};

// Activation read straight off the definitions: the per-place activation
// probe must be included in the marking and no inhibitor place may hold a
// blocking subset.
bool oracle_active(const XtpnNet& net, const Marking& m, std::size_t t) {
  if (!m_include(ActivationProbe::for_transition(net, m, t), m)) return false;
  for (const ArcRef& a : net.inhibitors(t)) {
    if (activating_subset(m.bag(a.place), net.places()[a.place].gamma_low, a.weight)) {
      return false;
    }
  }
  return true;
}

class OracleRun {
 public:
  OracleRun(const XtpnNet& net, const FixedDeadlines& deadlines, const OracleConfig& config)
      : net_(net), deadlines_(deadlines), config_(config) {}

  Trace run();

 private:
  void check_divisibility() const;
  void reevaluate();
  void apply_tick();
  void settle(const std::vector<RelevantEvent>& maturities);
  void emit(const RelevantEvent& ev);
  NetState final_state() const;

  const XtpnNet& net_;
  const FixedDeadlines& deadlines_;
  const OracleConfig& config_;
  OracleState z_;
  Trace trace_;
};

void OracleRun::check_divisibility() const {
  const auto check = [&](const Rat& value, const char* what) {
    if (value.is_infinite()) return;
    if (!value.is_multiple_of(config_.tick)) {
      throw std::invalid_argument(std::string("oracle tick does not divide ") + what + " " +
                                  value.str());
    }
  };
  for (const PlaceSpec& p : net_.places()) {
    check(p.gamma_low, "gamma bound");
    check(p.gamma_high, "gamma bound");
  }
  for (const TransitionSpec& t : net_.transitions()) {
    check(t.alpha_low, "alpha bound");
    check(t.alpha_high, "alpha bound");
    check(t.beta_low, "beta bound");
    check(t.beta_high, "beta bound");
  }
  for (const auto& lifetimes : net_.initial_tokens()) {
    for (const Rat& life : lifetimes) check(life, "initial lifetime");
  }
  for (const Rat& d : deadlines_.alpha) check(d, "alpha deadline");
  for (const Rat& d : deadlines_.beta) check(d, "beta deadline");
  check(config_.max_time, "max time");
}

void OracleRun::emit(const RelevantEvent& ev) {
  trace_.entries.push_back({ev, z_.marking.counts()});
}

void OracleRun::reevaluate() {
  for (std::size_t t = 0; t < z_.timers.size(); ++t) {
    OracleTimer& timer = z_.timers[t];
    if (timer.phase == OracleTimer::Phase::Producing) continue;
    if (!oracle_active(net_, z_.marking, t)) {
      timer = OracleTimer{};
    } else if (timer.phase != OracleTimer::Phase::Active) {
      timer.phase = OracleTimer::Phase::Active;
      timer.clock = Rat(0);
      timer.deadline = deadlines_.alpha.at(t);
      timer.held_read.clear();
    }
  }
}

void OracleRun::apply_tick() {
  z_.marking = age_marking(z_.marking, config_.tick);
  z_.now += config_.tick;
  for (std::size_t t = 0; t < z_.timers.size(); ++t) {
    OracleTimer& timer = z_.timers[t];
    if (timer.phase == OracleTimer::Phase::Producing) {
      timer.clock += config_.tick;
      continue;
    }
    const bool active_now = oracle_active(net_, z_.marking, t);
    if (!active_now) {
      timer = OracleTimer{};
    } else if (timer.phase == OracleTimer::Phase::Active) {
      timer.clock += config_.tick;
    } else {
      timer.phase = OracleTimer::Phase::Active;
      timer.clock = Rat(0);
      timer.deadline = deadlines_.alpha.at(t);
    }
  }
}

void OracleRun::settle(const std::vector<RelevantEvent>& maturities) {
  std::int64_t rounds = 0;
  bool first_round = true;
  for (;;) {
    if (++rounds > config_.max_zero_time_steps) {
      throw SimulationError("zero-time cascade exceeded " +
                            std::to_string(config_.max_zero_time_steps) + " rounds at time " +
                            z_.now.str());
    }
    bool progressed = false;

    const auto due = [&](OracleTimer::Phase phase) {
      std::vector<std::size_t> out;
      for (std::size_t t = 0; t < z_.timers.size(); ++t) {
        if (z_.timers[t].phase == phase && z_.timers[t].clock == z_.timers[t].deadline) {
          out.push_back(t);
        }
      }
      return out;
    };

    for (const std::size_t t : due(OracleTimer::Phase::Producing)) {
      OracleTimer& timer = z_.timers[t];
      if (timer.phase != OracleTimer::Phase::Producing || timer.clock != timer.deadline) continue;
      Marking produced = build_produce_set(net_, t, config_.read_arc_mode);
      if (config_.read_arc_mode == ReadArcMode::ConsumedAged) {
        for (const auto& [place, lifetimes] : timer.held_read) {
          const Rat& bound = net_.places()[place].gamma_high;
          for (const Rat& life : lifetimes) {
            const Rat aged = life + timer.deadline;
            if (aged <= bound) produced.bag(place).insert(aged);
          }
        }
      }
      const Rat detail = timer.deadline;
      z_.marking = m_add(z_.marking, produced);
      timer = OracleTimer{};
      reevaluate();
      emit({z_.now, EventKind::ProductionEnd, t, detail});
      progressed = true;
    }

    for (const std::size_t t : due(OracleTimer::Phase::Active)) {
      OracleTimer& timer = z_.timers[t];
      if (timer.phase != OracleTimer::Phase::Active || timer.clock != timer.deadline) continue;
      const Rat detail = timer.deadline;
      const std::uint64_t draw_key = mix_key({std::uint64_t(t), z_.beta_episode[t]});
      const Marking consumed = build_consume_set(net_, z_.marking, t, config_.removal,
                                                 config_.read_arc_mode, draw_key);
      z_.marking = m_subtract(z_.marking, consumed);
      timer.phase = OracleTimer::Phase::Producing;
      timer.clock = Rat(0);
      timer.deadline = deadlines_.beta.at(t);
      timer.held_read.clear();
      if (config_.read_arc_mode != ReadArcMode::NotConsumed) {
        for (const ArcRef& a : net_.read_inputs(t)) {
          timer.held_read.emplace_back(a.place, consumed.bag(a.place).elements());
        }
      }
      z_.beta_episode[t] += 1;
      reevaluate();
      emit({z_.now, EventKind::ProductionStart, t, detail});
      progressed = true;
    }

    bool dropped = false;
    for (std::size_t p = 0; p < z_.marking.size(); ++p) {
      const Rat& bound = net_.places()[p].gamma_high;
      if (bound.is_infinite()) continue;
      TokenBag& bag = z_.marking.bag(p);
      while (!bag.empty() && bag.elements().back() == bound) {
        bag.erase_one(bound);
        emit({z_.now, EventKind::Expiry, p, bound});
        dropped = true;
      }
    }
    if (dropped) {
      reevaluate();
      progressed = true;
    }

    if (first_round) {
      for (const RelevantEvent& ev : maturities) emit(ev);
      first_round = false;
    }
    if (!progressed) return;
  }
}

NetState OracleRun::final_state() const {
  NetState out;
  out.marking = z_.marking;
  out.now = z_.now;
  out.timers.reserve(z_.timers.size());
  for (const OracleTimer& timer : z_.timers) {
    TransitionTimer t;
    switch (timer.phase) {
      case OracleTimer::Phase::Inactive: t.phase = TransitionTimer::Phase::Inactive; break;
      case OracleTimer::Phase::Active: t.phase = TransitionTimer::Phase::Active; break;
      case OracleTimer::Phase::Producing: t.phase = TransitionTimer::Phase::Producing; break;
    }
    t.clock = timer.clock;
    t.deadline = timer.deadline;
    out.timers.push_back(std::move(t));
  }
  return out;
}

Trace OracleRun::run() {
  check_divisibility();
  for (const PlaceSpec& p : net_.places()) trace_.place_ids.push_back(p.id);
  for (const TransitionSpec& t : net_.transitions()) trace_.transition_ids.push_back(t.id);

  z_.marking = Marking::initial(net_);
  z_.timers.assign(net_.transitions().size(), OracleTimer{});
  z_.now = Rat(0);
  z_.beta_episode.assign(net_.transitions().size(), 0);
  reevaluate();
  trace_.initial_counts = z_.marking.counts();

  if (config_.max_time > Rat(0)) {
    settle({});
    Rat remaining = config_.max_time;
    while (remaining >= config_.tick) {
      std::vector<RelevantEvent> maturities;
      for (std::size_t p = 0; p < z_.marking.size(); ++p) {
        const Rat& low = net_.places()[p].gamma_low;
        if (low.is_zero()) continue;
        for (const Rat& life : z_.marking.bag(p).elements()) {
          if (life + config_.tick == low) {
            maturities.push_back({z_.now + config_.tick, EventKind::Maturity, p, low});
          }
        }
      }
      apply_tick();
      settle(maturities);
      remaining = remaining - config_.tick;
    }
  }

  trace_.final_time = z_.now;
  trace_.final_state = final_state();
  return trace_;
}

}  // namespace

Trace oracle_simulate(const XtpnNet& net, const FixedDeadlines& deadlines,
                      const OracleConfig& config) {
  if (config.tick <= Rat(0) || config.tick.is_infinite()) {
    throw std::invalid_argument("oracle tick must be positive and finite");
  }
  return OracleRun(net, deadlines, config).run();
}

}  // namespace xtpn
