#include "xtpn/bag.hpp"

#include <algorithm>
#include <stdexcept>

#include "xtpn/rng.hpp"

namespace xtpn {

TokenBag::TokenBag(Rat bound_high, std::vector<Rat> elements)
    : bound_high_(std::move(bound_high)), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  for (const Rat& e : elements_) {
    if (e > bound_high_) throw std::invalid_argument("token lifetime exceeds bag bound");
  }
}

void TokenBag::insert(const Rat& value) {
  if (value > bound_high_) throw std::invalid_argument("token lifetime exceeds bag bound");
  elements_.insert(std::upper_bound(elements_.begin(), elements_.end(), value), value);
}

void TokenBag::erase_one(const Rat& value) {
  const auto it = std::lower_bound(elements_.begin(), elements_.end(), value);
  if (it == elements_.end() || *it != value) {
    throw std::logic_error("removing a token that is not in the bag");
  }
  elements_.erase(it);
}

TokenBag age_bag(const TokenBag& bag, const Rat& tau) {
  TokenBag out(bag.bound_high());
  for (const Rat& e : bag.elements()) {
    const Rat aged = e + tau;
    if (aged <= bag.bound_high()) out.insert(aged);
  }
  return out;
}

TokenBag add_fresh(const TokenBag& bag, std::int64_t v) {
  TokenBag out = bag;
  for (std::int64_t i = 0; i < v; ++i) out.insert(Rat(0));
  return out;
}

std::size_t mature_count(const TokenBag& bag, const Rat& gamma_low) {
  const auto& e = bag.elements();
  return e.end() - std::lower_bound(e.begin(), e.end(), gamma_low);
}

std::optional<TokenBag> activating_subset(const TokenBag& bag, const Rat& gamma_low,
                                          std::int64_t weight) {
  const auto& e = bag.elements();
  const auto first = std::lower_bound(e.begin(), e.end(), gamma_low);
  if (e.end() - first < weight) return std::nullopt;
  return TokenBag(bag.bound_high(), std::vector<Rat>(first, e.end()));
}

RemovalResult remove_tokens(const TokenBag& bag, const TokenBag& activating, std::int64_t v,
                            const RemovalPolicy& policy, std::uint64_t draw_key) {
  if (v < 0 || std::size_t(v) > activating.size()) {
    throw std::logic_error("not enough activating tokens to remove");
  }
  const auto& cand = activating.elements();
  std::vector<Rat> removed;
  removed.reserve(v);
  switch (policy.kind) {
    case RemovalKind::Oldest:
      removed.assign(cand.end() - v, cand.end());
      break;
    case RemovalKind::Youngest:
      removed.assign(cand.begin(), cand.begin() + v);
      break;
    case RemovalKind::Random: {
      std::vector<std::size_t> idx(cand.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      const std::uint64_t key = mix_key({policy.seed, draw_key});
      for (std::int64_t i = 0; i < v; ++i) {
        const std::uint64_t j = i + bounded_uniform(mix_key({key, std::uint64_t(i)}),
                                                    idx.size() - i);
        std::swap(idx[i], idx[j]);
        removed.push_back(cand[idx[i]]);
      }
      std::sort(removed.begin(), removed.end());
      break;
    }
  }
  RemovalResult out{bag, std::move(removed)};
  for (const Rat& r : out.removed) out.remaining.erase_one(r);
  return out;
}

Marking Marking::initial(const XtpnNet& net) {
  Marking m;
  m.bags_.reserve(net.places().size());
  for (std::size_t p = 0; p < net.places().size(); ++p) {
    m.bags_.emplace_back(net.places()[p].gamma_high, net.initial_tokens()[p]);
  }
  return m;
}

Marking Marking::empty_like(const XtpnNet& net) {
  Marking m;
  m.bags_.reserve(net.places().size());
  for (const PlaceSpec& p : net.places()) m.bags_.emplace_back(p.gamma_high);
  return m;
}

std::vector<std::int64_t> Marking::counts() const {
  std::vector<std::int64_t> out;
  out.reserve(bags_.size());
  for (const TokenBag& b : bags_) out.push_back(std::int64_t(b.size()));
  return out;
}

Marking age_marking(const Marking& m, const Rat& tau) {
  Marking out = m;
  for (std::size_t p = 0; p < m.size(); ++p) out.bag(p) = age_bag(m.bag(p), tau);
  return out;
}

Marking m_add(const Marking& m1, const Marking& m2) {
  if (m1.size() != m2.size()) throw std::logic_error("marking size mismatch");
  Marking out = m1;
  for (std::size_t p = 0; p < m2.size(); ++p) {
    for (const Rat& e : m2.bag(p).elements()) out.bag(p).insert(e);
  }
  return out;
}

Marking m_subtract(const Marking& m1, const Marking& m2) {
  if (m1.size() != m2.size()) throw std::logic_error("marking size mismatch");
  Marking out = m1;
  for (std::size_t p = 0; p < m2.size(); ++p) {
    for (const Rat& e : m2.bag(p).elements()) out.bag(p).erase_one(e);
  }
  return out;
}

namespace {

// Largest arc weight per input place; a place can carry a read and an
// inhibitor arc to the same transition, and activation needs each satisfied.
std::vector<std::pair<std::size_t, std::int64_t>> required_inputs(const XtpnNet& net,
                                                                  std::size_t t) {
  std::vector<std::pair<std::size_t, std::int64_t>> need;
  const auto add = [&](const ArcRef& a) {
    for (auto& n : need) {
      if (n.first == a.place) {
        n.second = std::max(n.second, a.weight);
        return;
      }
    }
    need.emplace_back(a.place, a.weight);
  };
  for (const ArcRef& a : net.normal_inputs(t)) add(a);
  for (const ArcRef& a : net.read_inputs(t)) add(a);
  return need;
}

}  // namespace

ActivationProbe ActivationProbe::for_transition(const XtpnNet& net, const Marking& m,
                                                std::size_t t) {
  ActivationProbe probe;
  probe.entries_.assign(m.size(), Entry::Absent);
  probe.subsets_.assign(m.size(), TokenBag());
  for (const auto& [place, weight] : required_inputs(net, t)) {
    auto sub = activating_subset(m.bag(place), net.places()[place].gamma_low, weight);
    if (sub) {
      probe.entries_[place] = Entry::Subset;
      probe.subsets_[place] = std::move(*sub);
    } else {
      probe.entries_[place] = Entry::NotEnough;
    }
  }
  return probe;
}

bool m_include(const ActivationProbe& probe, const Marking& m) {
  if (probe.size() != m.size()) throw std::logic_error("marking size mismatch");
  for (std::size_t p = 0; p < m.size(); ++p) {
    switch (probe.entry(p)) {
      case ActivationProbe::Entry::Absent:
        break;
      case ActivationProbe::Entry::NotEnough:
        return false;
      case ActivationProbe::Entry::Subset: {
        const auto& want = probe.subset(p).elements();
        const auto& have = m.bag(p).elements();
        // sub-multiset test over two ascending runs
        auto it = have.begin();
        for (const Rat& w : want) {
          it = std::lower_bound(it, have.end(), w);
          if (it == have.end() || *it != w) return false;
          ++it;
        }
        break;
      }
    }
  }
  return true;
}

Marking build_produce_set(const XtpnNet& net, std::size_t t, ReadArcMode mode) {
  Marking out = Marking::empty_like(net);
  for (const ArcRef& a : net.outputs(t)) {
    out.bag(a.place) = add_fresh(out.bag(a.place), a.weight);
  }
  if (mode == ReadArcMode::ConsumedFresh) {
    for (const ArcRef& a : net.read_inputs(t)) {
      out.bag(a.place) = add_fresh(out.bag(a.place), a.weight);
    }
  }
  return out;
}

Marking build_consume_set(const XtpnNet& net, const Marking& m, std::size_t t,
                          const RemovalPolicy& policy, ReadArcMode mode,
                          std::uint64_t draw_key) {
  Marking out = Marking::empty_like(net);
  const auto take = [&](const ArcRef& a) {
    const auto sub = activating_subset(m.bag(a.place), net.places()[a.place].gamma_low, a.weight);
    if (!sub) throw std::logic_error("consume set requested for an inactive transition");
    auto removal = remove_tokens(m.bag(a.place), *sub, a.weight, policy,
                                 mix_key({draw_key, std::uint64_t(a.place)}));
    for (const Rat& r : removal.removed) out.bag(a.place).insert(r);
  };
  for (const ArcRef& a : net.normal_inputs(t)) take(a);
  if (mode != ReadArcMode::NotConsumed) {
    for (const ArcRef& a : net.read_inputs(t)) take(a);
  }
  return out;
}

}  // namespace xtpn
