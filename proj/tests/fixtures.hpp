#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "xtpn/net.hpp"
#include "xtpn/oracle.hpp"
#include "xtpn/rational.hpp"

namespace fixtures {

using xtpn::Arc;
using xtpn::ArcKind;
using xtpn::NetDef;
using xtpn::Rat;
using xtpn::XtpnNet;

// Producer/consumer loop: t0 feeds p0, t1 drains it.
inline XtpnNet producer_consumer() {
  NetDef def;
  def.places.push_back({"p0", Rat(1), Rat(5)});
  def.transitions.push_back({"t0", Rat(2), Rat(2), Rat(1), Rat(4)});
  def.transitions.push_back({"t1", Rat(1), Rat(3), Rat(2), Rat(2)});
  def.arcs.push_back({"t0", "p0", 1, ArcKind::Normal});
  def.arcs.push_back({"p0", "t1", 1, ArcKind::Normal});
  def.initial_tokens = {{}};
  return XtpnNet(std::move(def));
}

// One place with a maturity window feeding a three-token transition; the
// youngest initial lifetime decides whether activation survives aging.
inline XtpnNet maturity_window(const Rat& youngest) {
  NetDef def;
  def.places.push_back({"p0", Rat(2), Rat(10)});
  def.transitions.push_back({"t0", Rat(5), Rat(10), Rat(1), Rat(1)});
  def.arcs.push_back({"p0", "t0", 3, ArcKind::Normal});
  def.initial_tokens = {{youngest, Rat(4), Rat(4), Rat(19, 2)}};
  return XtpnNet(std::move(def));
}

// Read-arc loop: four tokens cycle through t0 over a weight-4 read arc.
inline XtpnNet read_arc_cycle() {
  NetDef def;
  def.places.push_back({"p0", Rat(2), Rat(20)});
  def.transitions.push_back({"t0", Rat(0), Rat(0), Rat(4), Rat(4)});
  def.arcs.push_back({"p0", "t0", 4, ArcKind::Read});
  def.initial_tokens = {{Rat(1), Rat(6), Rat(7), Rat(15), Rat(17)}};
  return XtpnNet(std::move(def));
}

// Inhibitor gate: p0 blocks t0 at weight 5 while p1 supplies it.
inline XtpnNet inhibitor_gate(bool blocked) {
  NetDef def;
  def.places.push_back({"p0", Rat(2), Rat(30)});
  def.places.push_back({"p1", Rat(1), Rat(20)});
  def.transitions.push_back({"t0", Rat(1), Rat(2), Rat(1), Rat(1)});
  def.arcs.push_back({"p0", "t0", 5, ArcKind::Inhibitor});
  def.arcs.push_back({"p1", "t0", 3, ArcKind::Normal});
  std::vector<Rat> p0 = {Rat(0), Rat(3), Rat(4), Rat(5), Rat(6)};
  if (blocked) p0.push_back(Rat(7));  // fifth mature token arms the inhibitor
  def.initial_tokens = {p0, {Rat(2), Rat(3), Rat(4)}};
  return XtpnNet(std::move(def));
}

// Random scenario on the 1/4 grid: small nets with fixed deadlines, the
// shape used for engine/oracle cross-validation.
struct Scenario {
  NetDef def;
  xtpn::FixedDeadlines deadlines;
};

inline Scenario random_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return std::int64_t(std::uniform_int_distribution<std::int64_t>(lo, hi)(rng));
  };
  const auto quarters = [&](std::int64_t lo, std::int64_t hi) { return Rat(pick(lo, hi), 4); };

  Scenario s;
  const std::int64_t n_places = pick(1, 4);
  const std::int64_t n_trans = pick(0, 4);
  for (std::int64_t p = 0; p < n_places; ++p) {
    const Rat low = quarters(0, 8);
    const Rat high = pick(0, 7) == 0 ? Rat::infinity() : low + quarters(1, 16);
    s.def.places.push_back({"p" + std::to_string(p), low, high});
    std::vector<Rat> tokens;
    const std::int64_t count = pick(0, 4);
    for (std::int64_t k = 0; k < count; ++k) {
      Rat life = quarters(0, 20);
      if (life > s.def.places.back().gamma_high) life = s.def.places.back().gamma_high;
      tokens.push_back(life);
    }
    s.def.initial_tokens.push_back(std::move(tokens));
  }
  for (std::int64_t t = 0; t < n_trans; ++t) {
    const Rat alpha_low = quarters(0, 6);
    Rat alpha_high = pick(0, 7) == 0 ? Rat::infinity() : alpha_low + quarters(0, 6);
    Rat beta_low = quarters(0, 6);
    Rat beta_high = pick(0, 7) == 0 ? Rat::infinity() : beta_low + quarters(0, 6);
    // keep a zero-time transition impossible: some bound must exceed zero
    if (alpha_high == Rat(0) && beta_high == Rat(0)) beta_low = beta_high = Rat(1, 4);
    s.def.transitions.push_back(
        {"t" + std::to_string(t), alpha_low, alpha_high, beta_low, beta_high});

    const auto fixed = [&](const Rat& low, const Rat& high) {
      const Rat span = high.is_infinite() ? Rat(2) : xtpn::min(high - low, Rat(2));
      return low + Rat(pick(0, span.floor_scaled(4)), 4);
    };
    Rat alpha = fixed(alpha_low, alpha_high);
    Rat beta = fixed(beta_low, beta_high);
    if (alpha == Rat(0) && beta == Rat(0)) {
      // cascades must consume time somewhere; push one deadline off zero
      if (!(beta_high < Rat(1, 4))) {
        beta = xtpn::max(beta_low, Rat(1, 4));
      } else {
        alpha = xtpn::max(alpha_low, Rat(1, 4));
      }
    }
    s.deadlines.alpha.push_back(alpha);
    s.deadlines.beta.push_back(beta);
  }
  for (std::int64_t p = 0; p < n_places; ++p) {
    for (std::int64_t t = 0; t < n_trans; ++t) {
      const std::string pid = "p" + std::to_string(p);
      const std::string tid = "t" + std::to_string(t);
      switch (pick(0, 9)) {
        case 0:
        case 1:
          s.def.arcs.push_back({pid, tid, pick(1, 3), ArcKind::Normal});
          break;
        case 2:
          s.def.arcs.push_back({pid, tid, pick(1, 3), ArcKind::Read});
          break;
        case 3:
          s.def.arcs.push_back({pid, tid, pick(1, 3), ArcKind::Inhibitor});
          break;
        default:
          break;
      }
      if (pick(0, 3) == 0) {
        s.def.arcs.push_back({tid, pid, pick(1, 3), ArcKind::Normal});
      }
    }
  }
  return s;
}

}  // namespace fixtures
