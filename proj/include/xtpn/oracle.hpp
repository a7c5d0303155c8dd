#pragma once

#include <cstdint>
#include <vector>

#include "xtpn/engine.hpp"
#include "xtpn/modes.hpp"
#include "xtpn/net.hpp"
#include "xtpn/rational.hpp"

namespace xtpn {

// Reference simulator for cross-validation: walks time in fixed ticks and
// applies the state-change rules literally at every tick, never computing
// a next-event time. Deliberately shares no code with the engine's
// scheduler or state-change implementation; only the multiset algebra is
// reused.

struct OracleConfig {
  Rat tick;
  Rat max_time;
  RemovalPolicy removal;
  ReadArcMode read_arc_mode = ReadArcMode::NotConsumed;
  std::int64_t max_zero_time_steps = 100000;
};

struct FixedDeadlines {
  std::vector<Rat> alpha;  // one per transition
  std::vector<Rat> beta;
};

// Every finite interval bound, initial lifetime and deadline in the
// scenario must be an exact multiple of config.tick; violations throw
// std::invalid_argument.
Trace oracle_simulate(const XtpnNet& net, const FixedDeadlines& deadlines,
                      const OracleConfig& config);

}  // namespace xtpn
