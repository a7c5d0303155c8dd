#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xtpn/modes.hpp"
#include "xtpn/net.hpp"
#include "xtpn/rational.hpp"

namespace xtpn {

// Multiset of token lifetimes for one place, kept sorted ascending with
// multiplicity. Every element stays within [0, bound_high]; equal values are
// distinct but interchangeable tokens.
class TokenBag {
 public:
  TokenBag() : bound_high_(Rat::infinity()) {}
  explicit TokenBag(Rat bound_high, std::vector<Rat> elements = {});

  const Rat& bound_high() const { return bound_high_; }
  const std::vector<Rat>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }

  void insert(const Rat& value);
  // Removes one occurrence; throws std::logic_error if the value is absent.
  void erase_one(const Rat& value);

  bool operator==(const TokenBag&) const = default;

 private:
  Rat bound_high_;
  std::vector<Rat> elements_;
};

// Ages every token by tau; tokens strictly past bound_high disappear.
TokenBag age_bag(const TokenBag& bag, const Rat& tau);

// Inserts v fresh zero-age tokens.
TokenBag add_fresh(const TokenBag& bag, std::int64_t v);

std::size_t mature_count(const TokenBag& bag, const Rat& gamma_low);

// All tokens with lifetime >= gamma_low, when at least `weight` of them
// exist; nullopt means "not enough mature tokens".
std::optional<TokenBag> activating_subset(const TokenBag& bag, const Rat& gamma_low,
                                          std::int64_t weight);

struct RemovalResult {
  TokenBag remaining;
  std::vector<Rat> removed;  // ascending
};

// Takes exactly v tokens of the activating subset out of bag. Oldest removes
// the v largest lifetimes, Youngest the v smallest, Random draws uniformly
// without replacement keyed by (policy.seed, draw_key).
RemovalResult remove_tokens(const TokenBag& bag, const TokenBag& activating, std::int64_t v,
                            const RemovalPolicy& policy, std::uint64_t draw_key = 0);

// One TokenBag per place, indexed like the net's place list.
class Marking {
 public:
  Marking() = default;

  static Marking initial(const XtpnNet& net);
  static Marking empty_like(const XtpnNet& net);

  std::size_t size() const { return bags_.size(); }
  const TokenBag& bag(std::size_t place) const { return bags_[place]; }
  TokenBag& bag(std::size_t place) { return bags_[place]; }

  std::vector<std::int64_t> counts() const;

  bool operator==(const Marking&) const = default;

 private:
  std::vector<TokenBag> bags_;
};

Marking age_marking(const Marking& m, const Rat& tau);
// Pointwise multiset union.
Marking m_add(const Marking& m1, const Marking& m2);
// Pointwise multiset difference; throws std::logic_error when m2 is not
// included in m1 (an engine bug, never a user input condition).
Marking m_subtract(const Marking& m1, const Marking& m2);

// Per-place activation evidence for one transition: the mature subset where
// it exists, NotEnough where the place falls short, Absent off the inputs.
class ActivationProbe {
 public:
  enum class Entry { Absent, NotEnough, Subset };

  static ActivationProbe for_transition(const XtpnNet& net, const Marking& m, std::size_t t);

  std::size_t size() const { return entries_.size(); }
  Entry entry(std::size_t place) const { return entries_[place]; }
  const TokenBag& subset(std::size_t place) const { return subsets_[place]; }

 private:
  std::vector<Entry> entries_;
  std::vector<TokenBag> subsets_;
};

// True iff every Subset entry is a sub-multiset of the marking's bag and no
// entry is NotEnough (Absent entries are vacuous).
bool m_include(const ActivationProbe& probe, const Marking& m);

// Tokens a production inserts when it ends: fresh zeros on normal outputs,
// plus fresh zeros on read inputs under ConsumedFresh. ConsumedAged returns
// are handled by the production-end rule, which knows the held lifetimes.
Marking build_produce_set(const XtpnNet& net, std::size_t t, ReadArcMode mode);

// Tokens a production removes when it starts: weight-many per normal input
// (per removal policy, from the activating subset), read inputs included
// under the consuming modes. Throws std::logic_error if t is not active.
Marking build_consume_set(const XtpnNet& net, const Marking& m, std::size_t t,
                          const RemovalPolicy& policy, ReadArcMode mode,
                          std::uint64_t draw_key = 0);

}  // namespace xtpn
