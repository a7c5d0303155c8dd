#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xtpn/net.hpp"
#include "xtpn/rational.hpp"

namespace xtpn {

enum class PlaceClass { Classical, Timed };

enum class TransitionClass { Tpn, Itpn, Dpn, ClassicalOrImmediate, FullXtpn };

const char* class_name(PlaceClass c);
const char* class_name(TransitionClass c);

PlaceClass classify_place(const PlaceSpec& place);
TransitionClass classify_transition(const TransitionSpec& transition);

enum class NetClass { Classical, Tpn, Itpn, Dpn, MixedXtpn };

const char* class_name(NetClass c);

struct NetClassReport {
  std::vector<std::pair<std::string, PlaceClass>> places;
  std::vector<std::pair<std::string, TransitionClass>> transitions;
  NetClass overall = NetClass::MixedXtpn;
};

NetClassReport classify_net(const XtpnNet& net);

// Interval-rewriting targets; the net skeleton never changes.
enum class TransformTarget { ClassicalPlace, TpnTransition, ItpnTransition, DpnTransition,
                             ClassicalTransition };

std::optional<TransformTarget> parse_transform_target(std::string_view name);
const char* target_name(TransformTarget target);

struct TransformParams {
  std::optional<Rat> duration;               // DPN production time
  std::optional<Rat> alpha_low, alpha_high;  // TPN activation window
  std::optional<Rat> beta_low, beta_high;    // ITPN production window
};

class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rewrites one element's intervals to the target class. Values the target
// leaves free keep their current setting unless a parameter overrides them;
// if the result would not classify as the target, the missing parameters
// are reported. Throws TransformError.
XtpnNet transform_element(const XtpnNet& net, std::string_view element_id,
                          TransformTarget target, const TransformParams& params = {});

}  // namespace xtpn
