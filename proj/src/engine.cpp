#include "xtpn/engine.hpp"

#include <algorithm>
#include <functional>

#include "xtpn/rng.hpp"

namespace xtpn {

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::ProductionEnd: return "ProductionEnd";
    case EventKind::ProductionStart: return "ProductionStart";
    case EventKind::Expiry: return "Expiry";
    case EventKind::Maturity: return "Maturity";
  }
  return "?";
}

std::pair<std::optional<Rat>, std::vector<RelevantEvent>> next_relevant(const XtpnNet& net,
                                                                        const NetState& z) {
  std::optional<Rat> best;
  const auto consider = [&](const Rat& delta) {
    if (!best || delta < *best) best = delta;
  };

  for (std::size_t p = 0; p < z.marking.size(); ++p) {
    const PlaceSpec& spec = net.places()[p];
    for (const Rat& life : z.marking.bag(p).elements()) {
      if (life < spec.gamma_low) consider(spec.gamma_low - life);
      if (!spec.gamma_high.is_infinite()) consider(spec.gamma_high - life);
    }
  }
  for (const TransitionTimer& timer : z.timers) {
    if (timer.is_active() || timer.is_producing()) consider(timer.deadline - timer.clock);
  }

  std::vector<RelevantEvent> due;
  if (!best) return {best, due};
  const Rat at = z.now + *best;
  for (std::size_t t = 0; t < z.timers.size(); ++t) {
    const TransitionTimer& timer = z.timers[t];
    if (timer.is_producing() && timer.deadline - timer.clock == *best) {
      due.push_back({at, EventKind::ProductionEnd, t, timer.deadline});
    }
  }
  for (std::size_t t = 0; t < z.timers.size(); ++t) {
    const TransitionTimer& timer = z.timers[t];
    if (timer.is_active() && timer.deadline - timer.clock == *best) {
      due.push_back({at, EventKind::ProductionStart, t, timer.deadline});
    }
  }
  for (std::size_t p = 0; p < z.marking.size(); ++p) {
    const PlaceSpec& spec = net.places()[p];
    if (spec.gamma_high.is_infinite()) continue;
    for (const Rat& life : z.marking.bag(p).elements()) {
      if (spec.gamma_high - life == *best) {
        due.push_back({at, EventKind::Expiry, p, spec.gamma_high});
      }
    }
  }
  for (std::size_t p = 0; p < z.marking.size(); ++p) {
    const PlaceSpec& spec = net.places()[p];
    for (const Rat& life : z.marking.bag(p).elements()) {
      if (life < spec.gamma_low && spec.gamma_low - life == *best) {
        due.push_back({at, EventKind::Maturity, p, spec.gamma_low});
      }
    }
  }
  return {best, due};
}

namespace {

// Tokens that crossed gamma_low during the elapse into `now`: one Maturity
// record per token sitting exactly at gamma_low, in place order.
std::vector<RelevantEvent> maturity_crossings(const XtpnNet& net, const NetState& z) {
  std::vector<RelevantEvent> out;
  for (std::size_t p = 0; p < z.marking.size(); ++p) {
    const Rat& low = net.places()[p].gamma_low;
    if (low.is_zero()) continue;  // zero-age tokens are born mature, no crossing
    for (const Rat& life : z.marking.bag(p).elements()) {
      if (life == low) out.push_back({z.now, EventKind::Maturity, p, low});
    }
  }
  return out;
}

// Removes every token aged exactly to its place bound; emits one Expiry per
// token and re-derives activations once if anything was dropped.
bool run_expiry(const XtpnNet& net, NetState& z, DeadlineSampler& sampler,
                const std::function<void(const RelevantEvent&)>& emit) {
  bool dropped = false;
  for (std::size_t p = 0; p < z.marking.size(); ++p) {
    const Rat& bound = net.places()[p].gamma_high;
    if (bound.is_infinite()) continue;
    TokenBag& bag = z.marking.bag(p);
    while (!bag.empty() && bag.elements().back() == bound) {
      bag.erase_one(bound);
      emit({z.now, EventKind::Expiry, p, bound});
      dropped = true;
    }
  }
  if (dropped) reevaluate_activations(net, z, sampler);
  return dropped;
}

std::vector<std::size_t> due_order(const NetState& z, TransitionTimer::Phase phase,
                                   const SimConfig& config, std::uint64_t round) {
  std::vector<std::size_t> due;
  for (std::size_t t = 0; t < z.timers.size(); ++t) {
    const TransitionTimer& timer = z.timers[t];
    if (timer.phase == phase && timer.clock == timer.deadline) due.push_back(t);
  }
  if (config.conflict_shuffle && phase == TransitionTimer::Phase::Active && due.size() > 1) {
    const std::uint64_t key = mix_key({config.seed, std::uint64_t(z.now.num()),
                                       std::uint64_t(z.now.den()), round, 0x5D});
    for (std::size_t i = 0; i + 1 < due.size(); ++i) {
      const std::size_t j = i + bounded_uniform(mix_key({key, i}), due.size() - i);
      std::swap(due[i], due[j]);
    }
  }
  return due;
}

// Settles everything due at z.now, cascading zero-time follow-ups.
void settle_timestamp(const XtpnNet& net, NetState& z, const SimConfig& config,
                      DeadlineSampler& sampler, std::vector<RelevantEvent> maturities,
                      const std::function<void(const RelevantEvent&)>& emit) {
  const ModeConfig mode{config.read_arc_mode, config.removal};
  std::int64_t rounds = 0;
  bool first_round = true;
  for (;;) {
    if (++rounds > config.max_zero_time_steps) {
      throw SimulationError("zero-time cascade exceeded " +
                            std::to_string(config.max_zero_time_steps) + " rounds at time " +
                            z.now.str());
    }
    bool progressed = false;
    for (const std::size_t t : due_order(z, TransitionTimer::Phase::Producing, config, rounds)) {
      if (!z.timers[t].is_producing() || z.timers[t].clock != z.timers[t].deadline) continue;
      const Rat detail = z.timers[t].deadline;
      z = end_production(net, z, t, sampler, mode);
      emit({z.now, EventKind::ProductionEnd, t, detail});
      progressed = true;
    }
    for (const std::size_t t : due_order(z, TransitionTimer::Phase::Active, config, rounds)) {
      // an earlier start in this round may have deactivated t
      if (!z.timers[t].is_active() || z.timers[t].clock != z.timers[t].deadline) continue;
      const Rat detail = z.timers[t].deadline;
      z = start_production(net, z, t, sampler, mode);
      emit({z.now, EventKind::ProductionStart, t, detail});
      progressed = true;
    }
    progressed |= run_expiry(net, z, sampler, emit);
    if (first_round) {
      for (const RelevantEvent& ev : maturities) emit(ev);
      first_round = false;
    }
    if (!progressed) return;
  }
}

}  // namespace

std::vector<RelevantEvent> step(const XtpnNet& net, NetState& z, const SimConfig& config,
                                DeadlineSampler& sampler) {
  const auto [delta, due] = next_relevant(net, z);
  std::vector<RelevantEvent> out;
  if (!delta) return out;
  const bool aged = *delta > Rat(0);
  z = elapse(net, z, *delta, sampler);
  settle_timestamp(net, z, config, sampler,
                   aged ? maturity_crossings(net, z) : std::vector<RelevantEvent>{},
                   [&](const RelevantEvent& ev) { out.push_back(ev); });
  return out;
}

Trace simulate_with(const XtpnNet& net, const SimConfig& config, DeadlineSampler& sampler) {
  {
    const auto violations = validate(net);
    if (!is_clean(violations)) {
      std::string what = "net does not validate:";
      for (const Violation& v : violations) {
        if (v.severity == Severity::Error) what += " [" + v.element + ": " + v.rule + "]";
      }
      throw std::invalid_argument(what);
    }
  }

  Trace trace;
  for (const PlaceSpec& p : net.places()) trace.place_ids.push_back(p.id);
  for (const TransitionSpec& t : net.transitions()) trace.transition_ids.push_back(t.id);

  NetState z = initial_state(net, sampler);
  trace.initial_counts = z.marking.counts();

  while (z.now < config.max_time) {
    const auto [delta, due] = next_relevant(net, z);
    if (!delta || z.now + *delta > config.max_time) break;
    const bool aged = *delta > Rat(0);
    z = elapse(net, z, *delta, sampler);
    settle_timestamp(net, z, config, sampler,
                     aged ? maturity_crossings(net, z) : std::vector<RelevantEvent>{},
                     [&](const RelevantEvent& ev) {
                       trace.entries.push_back({ev, z.marking.counts()});
                     });
  }
  if (z.now < config.max_time) {
    z = elapse(net, z, config.max_time - z.now, sampler);
  }
  trace.final_time = z.now;
  trace.final_state = std::move(z);
  return trace;
}

Trace simulate(const XtpnNet& net, const SimConfig& config) {
  GridSampler sampler(config.seed, config.resolution, config.horizon_cap);
  return simulate_with(net, config, sampler);
}

StatsReport collect_stats(const Trace& trace) {
  StatsReport report;
  report.place_ids = trace.place_ids;
  report.transition_ids = trace.transition_ids;
  report.final_time = trace.final_time;
  report.events = std::int64_t(trace.entries.size());
  report.places.resize(trace.place_ids.size());
  report.transitions.resize(trace.transition_ids.size());
  for (std::size_t p = 0; p < report.places.size(); ++p) {
    report.places[p].min_tokens = trace.initial_counts[p];
    report.places[p].max_tokens = trace.initial_counts[p];
    report.places[p].final_tokens = trace.initial_counts[p];
  }
  for (const TraceEntry& entry : trace.entries) {
    for (std::size_t p = 0; p < entry.counts.size(); ++p) {
      report.places[p].min_tokens = std::min(report.places[p].min_tokens, entry.counts[p]);
      report.places[p].max_tokens = std::max(report.places[p].max_tokens, entry.counts[p]);
      report.places[p].final_tokens = entry.counts[p];
    }
    switch (entry.event.kind) {
      case EventKind::Expiry:
        report.places[entry.event.element].expired += 1;
        break;
      case EventKind::ProductionStart:
        report.transitions[entry.event.element].starts += 1;
        break;
      case EventKind::ProductionEnd:
        report.transitions[entry.event.element].producing_time += entry.event.detail;
        break;
      case EventKind::Maturity:
        break;
    }
  }
  return report;
}

}  // namespace xtpn
