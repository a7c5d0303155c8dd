#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xtpn/engine.hpp"
#include "xtpn/net.hpp"

namespace xtpn {

struct Diagnostic {
  std::size_t line = 0;  // 1-based; 0 when no position applies
  std::size_t column = 0;
  std::string message;
  Severity severity = Severity::Error;
};

struct ParseResult {
  std::optional<XtpnNet> net;  // set iff no error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return net.has_value(); }
};

// Line-oriented net format:
//   xtpn 1                         (optional version header)
//   place <id> gamma <lo> <hi>
//   trans <id> alpha <lo> <hi> beta <lo> <hi>
//   arc <place> -> <trans> w <n> [normal]
//   arc <trans> -> <place> w <n>
//   arc <place> -o <trans> w <n>   (inhibitor)
//   arc <place> <-> <trans> w <n>  (read)
//   tokens <place> <k1> <k2> ...
//   tokens <place> count <n>
// Times are "num", "num/den" or "inf"; '#' starts a comment. Validation
// runs after parsing and its findings carry the declaring line.
ParseResult parse_net(std::string_view text);

// Canonical form: version header, then places, transitions, arcs and
// non-empty token lists in declaration order, rationals in lowest terms.
std::string serialize_net(const XtpnNet& net);

// One event per line "<time> <kind> <element> <detail> | <counts...>",
// framed by a header and a final-state block.
std::string write_trace(const Trace& trace);

struct TraceFileEntry {
  Rat time;
  std::string kind;
  std::string element;
  Rat detail;
  std::vector<std::int64_t> counts;
};

struct TraceFile {
  std::vector<std::string> place_ids;
  std::vector<std::string> transition_ids;
  std::vector<std::int64_t> initial_counts;
  std::vector<TraceFileEntry> entries;
  Rat final_time;
};

// Parses write_trace output; throws std::runtime_error on malformed input.
TraceFile read_trace(std::string_view text);

StatsReport collect_stats(const TraceFile& file);

// Flat "key value" lines, one statistic per line.
std::string write_stats(const StatsReport& report);

}  // namespace xtpn
