#include "xtpn/net.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace xtpn {

XtpnNet::XtpnNet(NetDef def) : def_(std::move(def)) {
  def_.initial_tokens.resize(def_.places.size());
  for (std::size_t i = 0; i < def_.places.size(); ++i) {
    place_index_.emplace(def_.places[i].id, i);
  }
  for (std::size_t i = 0; i < def_.transitions.size(); ++i) {
    transition_index_.emplace(def_.transitions[i].id, i);
  }
  const std::size_t nt = def_.transitions.size();
  normal_in_.resize(nt);
  read_in_.resize(nt);
  inhibit_.resize(nt);
  outputs_.resize(nt);
  for (const Arc& arc : def_.arcs) {
    const auto src_p = place_index(arc.source);
    const auto dst_t = transition_index(arc.target);
    const auto src_t = transition_index(arc.source);
    const auto dst_p = place_index(arc.target);
    if (src_p && dst_t) {
      const ArcRef ref{*src_p, arc.weight};
      switch (arc.kind) {
        case ArcKind::Normal: normal_in_[*dst_t].push_back(ref); break;
        case ArcKind::Read: read_in_[*dst_t].push_back(ref); break;
        case ArcKind::Inhibitor: inhibit_[*dst_t].push_back(ref); break;
      }
    } else if (src_t && dst_p && arc.kind == ArcKind::Normal) {
      outputs_[*src_t].push_back(ArcRef{*dst_p, arc.weight});
    }
    // anything else is left to validate()
  }
}

std::optional<std::size_t> XtpnNet::place_index(std::string_view id) const {
  const auto it = place_index_.find(std::string(id));
  if (it == place_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> XtpnNet::transition_index(std::string_view id) const {
  const auto it = transition_index_.find(std::string(id));
  if (it == transition_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t XtpnNet::require_transition(std::string_view id) const {
  const auto t = transition_index(id);
  if (!t) throw std::out_of_range("unknown transition: " + std::string(id));
  return *t;
}

std::set<std::string> XtpnNet::pre_places(std::string_view transition) const {
  const std::size_t t = require_transition(transition);
  std::set<std::string> out;
  for (const ArcRef& a : normal_in_[t]) out.insert(def_.places[a.place].id);
  for (const ArcRef& a : read_in_[t]) out.insert(def_.places[a.place].id);
  return out;
}

std::set<std::string> XtpnNet::post_places(std::string_view transition) const {
  const std::size_t t = require_transition(transition);
  std::set<std::string> out;
  for (const ArcRef& a : outputs_[t]) out.insert(def_.places[a.place].id);
  return out;
}

std::set<std::string> XtpnNet::inhibitor_places(std::string_view transition) const {
  const std::size_t t = require_transition(transition);
  std::set<std::string> out;
  for (const ArcRef& a : inhibit_[t]) out.insert(def_.places[a.place].id);
  return out;
}

namespace {

void check_interval(std::vector<Violation>& out, const std::string& id, const char* rule,
                    const Rat& low, const Rat& high, bool strict) {
  if (low.is_infinite()) {
    out.push_back({id, rule, "lower bound must be finite"});
    return;
  }
  if (strict ? !(low < high) : !(low <= high)) {
    out.push_back({id, rule,
                   strict ? "lower bound must be strictly below upper bound"
                          : "lower bound must not exceed upper bound"});
  }
}

}  // namespace

std::vector<Violation> validate(const XtpnNet& net) {
  std::vector<Violation> out;

  if (net.places().empty()) {
    out.push_back({"", "no places", "a net needs at least one place"});
  }

  std::set<std::string> seen;
  for (const PlaceSpec& p : net.places()) {
    if (!seen.insert(p.id).second) {
      out.push_back({p.id, "duplicate id", "declared more than once"});
    }
    check_interval(out, p.id, "gamma_low < gamma_high", p.gamma_low, p.gamma_high, true);
  }
  for (const TransitionSpec& t : net.transitions()) {
    if (!seen.insert(t.id).second) {
      out.push_back({t.id, "duplicate id", "declared more than once"});
    }
    check_interval(out, t.id, "alpha bounds", t.alpha_low, t.alpha_high, false);
    check_interval(out, t.id, "beta bounds", t.beta_low, t.beta_high, false);
    if (t.alpha_high.is_infinite()) {
      out.push_back({t.id, "unbounded alpha",
                     "activation deadline will be sampled within the horizon cap",
                     Severity::Warning});
    }
    if (t.beta_high.is_infinite()) {
      out.push_back({t.id, "unbounded beta",
                     "production deadline will be sampled within the horizon cap",
                     Severity::Warning});
    }
  }

  std::set<std::tuple<std::string, std::string, ArcKind>> arc_seen;
  std::set<std::pair<std::string, std::string>> normal_pt, read_pt;
  for (const Arc& a : net.arcs()) {
    const std::string label = a.source + " -> " + a.target;
    const bool src_p = net.place_index(a.source).has_value();
    const bool src_t = net.transition_index(a.source).has_value();
    const bool dst_p = net.place_index(a.target).has_value();
    const bool dst_t = net.transition_index(a.target).has_value();
    if ((!src_p && !src_t) || (!dst_p && !dst_t)) {
      out.push_back({label, "arc endpoints", "endpoint does not name a declared element"});
      continue;
    }
    if (!(src_p && dst_t) && !(src_t && dst_p)) {
      out.push_back({label, "arc endpoints", "arcs connect a place with a transition"});
      continue;
    }
    if (a.kind != ArcKind::Normal && !(src_p && dst_t)) {
      out.push_back({label, "arc direction", "read and inhibitor arcs run place to transition"});
      continue;
    }
    if (a.weight < 1) {
      out.push_back({label, "arc weight", "weight must be a positive integer"});
    }
    if (!arc_seen.insert({a.source, a.target, a.kind}).second) {
      out.push_back({label, "duplicate arc", "use the weight instead of parallel arcs"});
    }
    if (src_p && dst_t) {
      if (a.kind == ArcKind::Normal) normal_pt.insert({a.source, a.target});
      if (a.kind == ArcKind::Read) read_pt.insert({a.source, a.target});
    }
  }
  for (const auto& pt : normal_pt) {
    if (read_pt.count(pt)) {
      out.push_back({pt.first + " -> " + pt.second, "conflicting arcs",
                     "a place cannot be both a normal and a read input of one transition"});
    }
  }

  for (std::size_t p = 0; p < net.places().size() && p < net.initial_tokens().size(); ++p) {
    const Rat& bound = net.places()[p].gamma_high;
    for (const Rat& life : net.initial_tokens()[p]) {
      if (life.is_infinite() || life > bound) {
        out.push_back({net.places()[p].id, "initial lifetime",
                       "initial token lifetime " + life.str() + " exceeds gamma_high"});
      }
    }
  }

  for (std::size_t t = 0; t < net.transitions().size(); ++t) {
    const TransitionSpec& spec = net.transitions()[t];
    const bool all_zero = spec.alpha_low.is_zero() && spec.alpha_high.is_zero() &&
                          spec.beta_low.is_zero() && spec.beta_high.is_zero();
    if (all_zero && net.normal_inputs(t).empty() && net.read_inputs(t).empty()) {
      out.push_back({spec.id, "immediate input transition",
                     "a zero-time transition without inputs would fire forever"});
    }
  }

  return out;
}

bool is_clean(const std::vector<Violation>& violations) {
  return std::none_of(violations.begin(), violations.end(),
                      [](const Violation& v) { return v.severity == Severity::Error; });
}

}  // namespace xtpn
