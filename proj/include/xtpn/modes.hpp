#pragma once

#include <cstdint>

namespace xtpn {

// Behavior of read arcs during a production cycle.
//   NotConsumed : tokens stay in place, gate activation only (default).
//   ConsumedFresh : taken at production start, returned as fresh zero-age tokens.
//   ConsumedAged : taken at production start, returned with lifetimes
//                  increased by the production duration; overflow is dropped.
enum class ReadArcMode { NotConsumed, ConsumedFresh, ConsumedAged };

enum class RemovalKind { Oldest, Youngest, Random };

struct RemovalPolicy {
  RemovalKind kind = RemovalKind::Oldest;
  std::uint64_t seed = 0;  // used by Random only
};

struct ModeConfig {
  ReadArcMode read_arc_mode = ReadArcMode::NotConsumed;
  RemovalPolicy removal;
};

}  // namespace xtpn
