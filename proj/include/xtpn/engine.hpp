#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xtpn/modes.hpp"
#include "xtpn/net.hpp"
#include "xtpn/rational.hpp"
#include "xtpn/state.hpp"

namespace xtpn {

enum class EventKind { ProductionEnd, ProductionStart, Expiry, Maturity };

const char* event_kind_name(EventKind kind);

// One discrete change: a token maturing or expiring at a place, or a
// transition switching phase. element indexes the place (Maturity/Expiry)
// or the transition (ProductionStart/End); detail carries the lifetime or
// deadline involved.
struct RelevantEvent {
  Rat at;
  EventKind kind;
  std::size_t element = 0;
  Rat detail;

  bool operator==(const RelevantEvent&) const = default;
};

struct SimConfig {
  std::uint64_t seed = 0;
  Rat max_time;
  std::int64_t resolution = 1000;
  Rat horizon_cap = Rat(1000);
  RemovalPolicy removal;
  ReadArcMode read_arc_mode = ReadArcMode::NotConsumed;
  std::int64_t max_zero_time_steps = 100000;
  // When set, same-timestamp production starts are processed in a seeded
  // pseudo-random order instead of declaration order.
  bool conflict_shuffle = false;
};

struct TraceEntry {
  RelevantEvent event;
  std::vector<std::int64_t> counts;  // tokens per place after the event

  bool operator==(const TraceEntry&) const = default;
};

struct Trace {
  std::vector<std::string> place_ids;
  std::vector<std::string> transition_ids;
  std::vector<std::int64_t> initial_counts;
  std::vector<TraceEntry> entries;
  Rat final_time;
  NetState final_state;
};

// Raised when a timestamp cannot be settled within max_zero_time_steps.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Time to the next discrete change and everything due exactly then
// (ends, then starts, then expiries, then maturities). nullopt when
// nothing is schedulable anymore.
std::pair<std::optional<Rat>, std::vector<RelevantEvent>> next_relevant(const XtpnNet& net,
                                                                        const NetState& z);

// Advances z to the next relevant timestamp and settles it completely,
// including same-timestamp cascades. Returns the events in processing
// order; empty means nothing was schedulable.
std::vector<RelevantEvent> step(const XtpnNet& net, NetState& z, const SimConfig& config,
                                DeadlineSampler& sampler);

// Runs until max_time with a seeded grid sampler. The trace is a pure
// function of (net, config).
Trace simulate(const XtpnNet& net, const SimConfig& config);

// Same loop with a caller-supplied sampler (fixed deadlines in tests).
Trace simulate_with(const XtpnNet& net, const SimConfig& config, DeadlineSampler& sampler);

struct PlaceStats {
  std::int64_t min_tokens = 0;
  std::int64_t max_tokens = 0;
  std::int64_t expired = 0;
  std::int64_t final_tokens = 0;
};

struct TransitionStats {
  std::int64_t starts = 0;
  Rat producing_time;
};

struct StatsReport {
  std::vector<std::string> place_ids;
  std::vector<std::string> transition_ids;
  Rat final_time;
  std::int64_t events = 0;
  std::vector<PlaceStats> places;
  std::vector<TransitionStats> transitions;
};

StatsReport collect_stats(const Trace& trace);

}  // namespace xtpn
