#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "xtpn/bag.hpp"
#include "xtpn/modes.hpp"
#include "xtpn/net.hpp"
#include "xtpn/rational.hpp"

namespace xtpn {

// Supplies the phase deadlines. Draws are keyed by (transition, episode) so
// results never depend on what other transitions are doing.
class DeadlineSampler {
 public:
  virtual ~DeadlineSampler() = default;
  virtual Rat alpha_deadline(const XtpnNet& net, std::size_t t, std::uint64_t episode) = 0;
  virtual Rat beta_deadline(const XtpnNet& net, std::size_t t, std::uint64_t episode) = 0;
};

// Uniform draw over the grid {low + k/resolution} within the interval.
// An infinite upper bound is replaced by low + horizon_cap.
class GridSampler final : public DeadlineSampler {
 public:
  GridSampler(std::uint64_t seed, std::int64_t resolution, Rat horizon_cap);

  Rat alpha_deadline(const XtpnNet& net, std::size_t t, std::uint64_t episode) override;
  Rat beta_deadline(const XtpnNet& net, std::size_t t, std::uint64_t episode) override;

 private:
  Rat draw(const Rat& low, const Rat& high, std::uint64_t key) const;

  std::uint64_t seed_;
  std::int64_t resolution_;
  Rat horizon_cap_;
};

// Fixed per-transition deadlines; episodes all reuse the same value.
class FixedSampler final : public DeadlineSampler {
 public:
  FixedSampler(std::vector<Rat> alpha, std::vector<Rat> beta);

  Rat alpha_deadline(const XtpnNet& net, std::size_t t, std::uint64_t episode) override;
  Rat beta_deadline(const XtpnNet& net, std::size_t t, std::uint64_t episode) override;

 private:
  std::vector<Rat> alpha_, beta_;
};

// Timer pair of one transition. The phase makes the pair exclusive by
// construction: clock is u while Active, w while Producing.
struct TransitionTimer {
  enum class Phase { Inactive, Active, Producing };

  Phase phase = Phase::Inactive;
  Rat clock;
  Rat deadline;
  // Lifetimes taken over read arcs at production start (consuming modes
  // only), returned when the production ends.
  std::vector<std::pair<std::size_t, std::vector<Rat>>> held_read;

  static TransitionTimer inactive() { return {}; }
  static TransitionTimer active(Rat deadline);

  bool is_active() const { return phase == Phase::Active; }
  bool is_producing() const { return phase == Phase::Producing; }

  bool operator==(const TransitionTimer&) const = default;
};

struct NetState {
  Marking marking;
  std::vector<TransitionTimer> timers;
  Rat now;
  // Sampling keys; bumped whenever a transition enters the matching phase.
  std::vector<std::uint64_t> alpha_episode;
  std::vector<std::uint64_t> beta_episode;
};

// Activation predicate on a marking: every normal/read input place holds an
// activating subset covering its arc weight, and no inhibitor place holds a
// blocking subset covering its weight. Transitions with no gating arcs are
// always active.
bool is_active(const XtpnNet& net, const Marking& m, std::size_t t);

NetState initial_state(const XtpnNet& net, DeadlineSampler& sampler);

// Time lapse: ages all tokens and advances timers; transitions losing their
// activating subsets deactivate, newly covered ones activate at u = 0 with a
// fresh deadline.
NetState elapse(const XtpnNet& net, const NetState& z, const Rat& tau, DeadlineSampler& sampler);

// Production start of t: consumes tokens, switches t to Producing with a
// fresh production deadline, then re-evaluates every other non-producing
// transition (timers of transitions active before and after are untouched).
NetState start_production(const XtpnNet& net, const NetState& z, std::size_t t,
                          DeadlineSampler& sampler, const ModeConfig& mode);

// Production end of t: inserts the produced tokens (plus read-arc returns
// per mode), then re-evaluates all non-producing transitions including t.
NetState end_production(const XtpnNet& net, const NetState& z, std::size_t t,
                        DeadlineSampler& sampler, const ModeConfig& mode);

// Re-derives Active/Inactive for every non-producing transition against the
// current marking; newly active ones start at u = 0 with a fresh deadline.
void reevaluate_activations(const XtpnNet& net, NetState& z, DeadlineSampler& sampler);

}  // namespace xtpn
