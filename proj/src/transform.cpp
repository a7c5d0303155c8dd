#include "xtpn/transform.hpp"

#include <algorithm>

namespace xtpn {

const char* class_name(PlaceClass c) {
  switch (c) {
    case PlaceClass::Classical: return "classical-place";
    case PlaceClass::Timed: return "timed-place";
  }
  return "?";
}

const char* class_name(TransitionClass c) {
  switch (c) {
    case TransitionClass::Tpn: return "TPN";
    case TransitionClass::Itpn: return "ITPN";
    case TransitionClass::Dpn: return "DPN";
    case TransitionClass::ClassicalOrImmediate: return "classical/immediate";
    case TransitionClass::FullXtpn: return "xTPN";
  }
  return "?";
}

const char* class_name(NetClass c) {
  switch (c) {
    case NetClass::Classical: return "Classical";
    case NetClass::Tpn: return "TPN";
    case NetClass::Itpn: return "ITPN";
    case NetClass::Dpn: return "DPN";
    case NetClass::MixedXtpn: return "mixed xTPN";
  }
  return "?";
}

PlaceClass classify_place(const PlaceSpec& place) {
  if (place.gamma_low.is_zero() && place.gamma_high.is_infinite()) return PlaceClass::Classical;
  return PlaceClass::Timed;
}

TransitionClass classify_transition(const TransitionSpec& t) {
  const bool alpha_zero = t.alpha_low.is_zero() && t.alpha_high.is_zero();
  const bool beta_zero = t.beta_low.is_zero() && t.beta_high.is_zero();
  if (alpha_zero && beta_zero) return TransitionClass::ClassicalOrImmediate;
  if (beta_zero) return TransitionClass::Tpn;
  if (alpha_zero) {
    const bool beta_positive_bounded =
        t.beta_low > Rat(0) && !t.beta_high.is_infinite();
    if (beta_positive_bounded && t.beta_low == t.beta_high) return TransitionClass::Dpn;
    if (beta_positive_bounded && t.beta_low < t.beta_high) return TransitionClass::Itpn;
  }
  return TransitionClass::FullXtpn;
}

NetClassReport classify_net(const XtpnNet& net) {
  NetClassReport report;
  bool all_places_classical = true;
  for (const PlaceSpec& p : net.places()) {
    const PlaceClass c = classify_place(p);
    all_places_classical &= (c == PlaceClass::Classical);
    report.places.emplace_back(p.id, c);
  }
  bool any = false, uniform = true;
  TransitionClass common = TransitionClass::FullXtpn;
  for (const TransitionSpec& t : net.transitions()) {
    const TransitionClass c = classify_transition(t);
    if (!any) {
      common = c;
      any = true;
    } else if (c != common) {
      uniform = false;
    }
    report.transitions.emplace_back(t.id, c);
  }
  report.overall = NetClass::MixedXtpn;
  if (all_places_classical) {
    if (!any) {
      report.overall = NetClass::Classical;
    } else if (uniform) {
      switch (common) {
        case TransitionClass::Tpn: report.overall = NetClass::Tpn; break;
        case TransitionClass::Itpn: report.overall = NetClass::Itpn; break;
        case TransitionClass::Dpn: report.overall = NetClass::Dpn; break;
        case TransitionClass::ClassicalOrImmediate: report.overall = NetClass::Classical; break;
        case TransitionClass::FullXtpn: break;
      }
    }
  }
  return report;
}

std::optional<TransformTarget> parse_transform_target(std::string_view name) {
  if (name == "classical-place") return TransformTarget::ClassicalPlace;
  if (name == "tpn") return TransformTarget::TpnTransition;
  if (name == "itpn") return TransformTarget::ItpnTransition;
  if (name == "dpn") return TransformTarget::DpnTransition;
  if (name == "classical-transition") return TransformTarget::ClassicalTransition;
  return std::nullopt;
}

const char* target_name(TransformTarget target) {
  switch (target) {
    case TransformTarget::ClassicalPlace: return "classical-place";
    case TransformTarget::TpnTransition: return "tpn";
    case TransformTarget::ItpnTransition: return "itpn";
    case TransformTarget::DpnTransition: return "dpn";
    case TransformTarget::ClassicalTransition: return "classical-transition";
  }
  return "?";
}

XtpnNet transform_element(const XtpnNet& net, std::string_view element_id,
                          TransformTarget target, const TransformParams& params) {
  NetDef def{net.places(), net.transitions(), net.arcs(), net.initial_tokens()};
  const auto place = net.place_index(element_id);
  const auto trans = net.transition_index(element_id);
  if (!place && !trans) {
    throw TransformError("unknown element: " + std::string(element_id));
  }

  if (target == TransformTarget::ClassicalPlace) {
    if (!place) throw TransformError("target classical-place needs a place");
    def.places[*place].gamma_low = Rat(0);
    def.places[*place].gamma_high = Rat::infinity();
    return XtpnNet(std::move(def));
  }

  if (!trans) throw TransformError("target " + std::string(target_name(target)) +
                                   " needs a transition");
  TransitionSpec& spec = def.transitions[*trans];
  std::vector<std::string> missing;
  switch (target) {
    case TransformTarget::TpnTransition:
      spec.beta_low = Rat(0);
      spec.beta_high = Rat(0);
      if (params.alpha_low) spec.alpha_low = *params.alpha_low;
      if (params.alpha_high) spec.alpha_high = *params.alpha_high;
      if (classify_transition(spec) != TransitionClass::Tpn) missing.push_back("alpha bounds");
      break;
    case TransformTarget::ItpnTransition:
      spec.alpha_low = Rat(0);
      spec.alpha_high = Rat(0);
      if (params.beta_low) spec.beta_low = *params.beta_low;
      if (params.beta_high) spec.beta_high = *params.beta_high;
      if (classify_transition(spec) != TransitionClass::Itpn) missing.push_back("beta bounds");
      break;
    case TransformTarget::DpnTransition:
      spec.alpha_low = Rat(0);
      spec.alpha_high = Rat(0);
      if (params.duration) {
        spec.beta_low = *params.duration;
        spec.beta_high = *params.duration;
      }
      if (classify_transition(spec) != TransitionClass::Dpn) missing.push_back("duration");
      break;
    case TransformTarget::ClassicalTransition:
      spec.alpha_low = Rat(0);
      spec.alpha_high = Rat(0);
      spec.beta_low = Rat(0);
      spec.beta_high = Rat(0);
      break;
    case TransformTarget::ClassicalPlace:
      break;  // handled above
  }
  if (!missing.empty()) {
    std::string what = "missing:";
    for (const std::string& m : missing) what += " " + m;
    throw TransformError(what);
  }
  return XtpnNet(std::move(def));
}

}  // namespace xtpn
