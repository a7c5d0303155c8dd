#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xtpn/rational.hpp"

namespace xtpn {

enum class ArcKind { Normal, Read, Inhibitor };

struct PlaceSpec {
  std::string id;
  Rat gamma_low;   // minimum token age before it can activate anything
  Rat gamma_high;  // maximum token age; strictly above it the token is gone

  bool operator==(const PlaceSpec&) const = default;
};

struct TransitionSpec {
  std::string id;
  Rat alpha_low, alpha_high;  // activation window
  Rat beta_low, beta_high;    // production window

  bool operator==(const TransitionSpec&) const = default;
};

struct Arc {
  std::string source;
  std::string target;
  std::int64_t weight = 1;
  ArcKind kind = ArcKind::Normal;

  bool operator==(const Arc&) const = default;
};

// Plain construction data; XtpnNet freezes it and builds lookup tables.
struct NetDef {
  std::vector<PlaceSpec> places;
  std::vector<TransitionSpec> transitions;
  std::vector<Arc> arcs;
  // One entry per place (shorter vectors are padded with empty lists).
  std::vector<std::vector<Rat>> initial_tokens;
};

enum class Severity { Error, Warning };

struct Violation {
  std::string element;
  std::string rule;
  std::string message;
  Severity severity = Severity::Error;
};

// A resolved place-side endpoint of an arc, seen from a transition.
struct ArcRef {
  std::size_t place = 0;
  std::int64_t weight = 1;
};

class XtpnNet {
 public:
  explicit XtpnNet(NetDef def);

  const std::vector<PlaceSpec>& places() const { return def_.places; }
  const std::vector<TransitionSpec>& transitions() const { return def_.transitions; }
  const std::vector<Arc>& arcs() const { return def_.arcs; }
  const std::vector<std::vector<Rat>>& initial_tokens() const { return def_.initial_tokens; }

  std::optional<std::size_t> place_index(std::string_view id) const;
  std::optional<std::size_t> transition_index(std::string_view id) const;

  // Resolved per-transition arc tables (ill-formed arcs are not indexed;
  // validate() reports them).
  const std::vector<ArcRef>& normal_inputs(std::size_t t) const { return normal_in_[t]; }
  const std::vector<ArcRef>& read_inputs(std::size_t t) const { return read_in_[t]; }
  const std::vector<ArcRef>& inhibitors(std::size_t t) const { return inhibit_[t]; }
  const std::vector<ArcRef>& outputs(std::size_t t) const { return outputs_[t]; }

  // Id-level queries; throw std::out_of_range on unknown transitions.
  std::set<std::string> pre_places(std::string_view transition) const;
  std::set<std::string> post_places(std::string_view transition) const;
  std::set<std::string> inhibitor_places(std::string_view transition) const;

 private:
  std::size_t require_transition(std::string_view id) const;

  NetDef def_;
  std::unordered_map<std::string, std::size_t> place_index_;
  std::unordered_map<std::string, std::size_t> transition_index_;
  std::vector<std::vector<ArcRef>> normal_in_, read_in_, inhibit_, outputs_;
};

// Complete well-formedness report; empty of errors iff the net is usable.
std::vector<Violation> validate(const XtpnNet& net);

bool is_clean(const std::vector<Violation>& violations);

}  // namespace xtpn
