#include <map>

#include "doctest.h"
#include "fixtures.hpp"
#include "xtpn/engine.hpp"
#include "xtpn/io.hpp"
#include "xtpn/transform.hpp"

using namespace xtpn;

namespace {

SimConfig quick_config(Rat max_time) {
  SimConfig config;
  config.max_time = std::move(max_time);
  return config;
}

std::vector<RelevantEvent> events_of(const Trace& trace, EventKind kind, std::size_t element) {
  std::vector<RelevantEvent> out;
  for (const TraceEntry& e : trace.entries) {
    if (e.event.kind == kind && e.event.element == element) out.push_back(e.event);
  }
  return out;
}

}  // namespace

TEST_CASE("next relevant state finds the earliest of the four clocks") {
  const XtpnNet net = fixtures::maturity_window(Rat(3, 2));
  FixedSampler sampler({Rat(5)}, {Rat(1)});
  const NetState z = initial_state(net, sampler);
  const auto [delta, due] = next_relevant(net, z);
  // the 3/2 token matures at +1/2, well before the +1/2+... expiry of 19/2
  REQUIRE(delta);
  CHECK(*delta == Rat(1, 2));
  REQUIRE(due.size() == 2);  // maturity of the 3/2 token and expiry of 19/2 both at +1/2
  CHECK(due[0].kind == EventKind::Expiry);
  CHECK(due[1].kind == EventKind::Maturity);
}

TEST_CASE("a transition at its deadline is due immediately") {
  const XtpnNet net = fixtures::read_arc_cycle();
  FixedSampler sampler({Rat(0)}, {Rat(4)});
  const NetState z = initial_state(net, sampler);
  const auto [delta, due] = next_relevant(net, z);
  REQUIRE(delta);
  CHECK(*delta == Rat(0));
  REQUIRE_FALSE(due.empty());
  CHECK(due[0].kind == EventKind::ProductionStart);
  CHECK(due[0].at == Rat(0));
}

TEST_CASE("nothing schedulable means no next state") {
  NetDef def;
  def.places.push_back({"p", Rat(0), Rat::infinity()});
  def.transitions.push_back({"t", Rat(1), Rat(2), Rat(1), Rat(2)});
  def.arcs.push_back({"p", "t", 1, ArcKind::Normal});
  const XtpnNet net(std::move(def));
  FixedSampler sampler({Rat(1)}, {Rat(1)});
  const NetState z = initial_state(net, sampler);  // no tokens, t inactive
  const auto [delta, due] = next_relevant(net, z);
  CHECK_FALSE(delta);
  CHECK(due.empty());
}

TEST_CASE("producer fires on a fixed cadence") {
  const XtpnNet net = fixtures::producer_consumer();
  FixedSampler sampler({Rat(2), Rat(1)}, {Rat(3), Rat(2)});
  SimConfig config = quick_config(Rat(20));
  const Trace trace = simulate_with(net, config, sampler);

  const auto ends = events_of(trace, EventKind::ProductionEnd, 0);
  REQUIRE(ends.size() == 4);
  for (std::size_t k = 0; k < ends.size(); ++k) {
    CHECK(ends[k].at == Rat(5).scaled(k + 1));  // period alpha+beta = 5, horizon inclusive
  }
}

TEST_CASE("max_time zero yields the initial state and no events") {
  const XtpnNet net = fixtures::read_arc_cycle();
  const Trace trace = simulate(net, quick_config(Rat(0)));
  CHECK(trace.entries.empty());
  CHECK(trace.final_time == Rat(0));
  CHECK(trace.final_state.marking == Marking::initial(net));
}

TEST_CASE("same seed, same bytes; different seed, different schedule") {
  const XtpnNet net = fixtures::producer_consumer();
  SimConfig config = quick_config(Rat(50));
  config.seed = 7;
  const std::string first = write_trace(simulate(net, config));
  const std::string second = write_trace(simulate(net, config));
  CHECK(first == second);

  config.seed = 8;
  const std::string other = write_trace(simulate(net, config));
  CHECK(first != other);
}

TEST_CASE("an immediate transition drains its input within one timestamp") {
  NetDef def;
  def.places.push_back({"p", Rat(0), Rat::infinity()});
  def.places.push_back({"q", Rat(0), Rat::infinity()});
  def.transitions.push_back({"t", Rat(0), Rat(0), Rat(0), Rat(0)});
  def.arcs.push_back({"p", "t", 1, ArcKind::Normal});
  def.arcs.push_back({"t", "q", 1, ArcKind::Normal});
  def.initial_tokens = {{Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)}, {}};
  const XtpnNet net(std::move(def));

  const Trace trace = simulate(net, quick_config(Rat(1)));
  REQUIRE(trace.entries.size() == 10);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(trace.entries[k].event.at == Rat(0));
    CHECK(trace.entries[k].event.kind ==
          (k % 2 == 0 ? EventKind::ProductionStart : EventKind::ProductionEnd));
  }
  CHECK(trace.final_state.timers[0].phase == TransitionTimer::Phase::Inactive);
  CHECK(trace.final_state.marking.bag(0).empty());
  CHECK(trace.final_state.marking.bag(1).size() == 5);
}

TEST_CASE("a self-feeding zero-time loop aborts with a diagnostic") {
  NetDef def;
  def.places.push_back({"p", Rat(0), Rat::infinity()});
  def.transitions.push_back({"t", Rat(0), Rat(0), Rat(0), Rat(0)});
  def.arcs.push_back({"p", "t", 1, ArcKind::Normal});
  def.arcs.push_back({"t", "p", 1, ArcKind::Normal});
  def.initial_tokens = {{Rat(0)}};
  const XtpnNet net(std::move(def));
  SimConfig config = quick_config(Rat(1));
  config.max_zero_time_steps = 50;
  CHECK_THROWS_AS(simulate(net, config), SimulationError);
}

TEST_CASE("a token at the expiry bound is consumed by a same-time start, not dropped") {
  // deadline hits exactly when the only token reaches its maximum age
  NetDef def;
  def.places.push_back({"p", Rat(0), Rat(3)});
  def.places.push_back({"q", Rat(0), Rat::infinity()});
  def.transitions.push_back({"t", Rat(3), Rat(3), Rat(1), Rat(1)});
  def.arcs.push_back({"p", "t", 1, ArcKind::Normal});
  def.arcs.push_back({"t", "q", 1, ArcKind::Normal});
  def.initial_tokens = {{Rat(0)}, {}};
  const XtpnNet net(std::move(def));

  const Trace trace = simulate(net, quick_config(Rat(5)));
  REQUIRE(trace.entries.size() >= 2);
  CHECK(trace.entries[0].event.kind == EventKind::ProductionStart);
  CHECK(trace.entries[0].event.at == Rat(3));
  CHECK(events_of(trace, EventKind::Expiry, 0).empty());
  CHECK(trace.final_state.marking.bag(1).size() == 1);
}

TEST_CASE("without a taker the token expires exactly at the bound") {
  NetDef def;
  def.places.push_back({"p", Rat(0), Rat(3)});
  def.initial_tokens = {{Rat(0)}};
  const XtpnNet net(std::move(def));

  const Trace trace = simulate(net, quick_config(Rat(5)));
  REQUIRE(trace.entries.size() == 1);
  CHECK(trace.entries[0].event.kind == EventKind::Expiry);
  CHECK(trace.entries[0].event.at == Rat(3));
  CHECK(trace.entries[0].event.detail == Rat(3));
  CHECK(trace.final_state.marking.bag(0).empty());

  const StatsReport report = collect_stats(trace);
  CHECK(report.places[0].expired == 1);
  CHECK(report.places[0].max_tokens == 1);
  CHECK(report.places[0].min_tokens == 0);
}

TEST_CASE("trace times never decrease and production phases pair up in range") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto scenario = fixtures::random_scenario(seed);
    const XtpnNet net(scenario.def);
    FixedSampler sampler(scenario.deadlines.alpha, scenario.deadlines.beta);
    const Trace trace = simulate_with(net, quick_config(Rat(16)), sampler);

    Rat last(0);
    std::map<std::size_t, Rat> open;  // transition -> start time
    for (const TraceEntry& entry : trace.entries) {
      CHECK(entry.event.at >= last);
      last = entry.event.at;
      if (entry.event.kind == EventKind::ProductionStart) {
        // the activation episode ran for exactly the sampled deadline
        CHECK(entry.event.detail >= net.transitions()[entry.event.element].alpha_low);
        CHECK(entry.event.detail <= net.transitions()[entry.event.element].alpha_high);
        CHECK_FALSE(open.count(entry.event.element));
        open.emplace(entry.event.element, entry.event.at);
      } else if (entry.event.kind == EventKind::ProductionEnd) {
        const auto it = open.find(entry.event.element);
        REQUIRE(it != open.end());
        const Rat duration = entry.event.at - it->second;
        CHECK(duration >= net.transitions()[entry.event.element].beta_low);
        CHECK(duration <= net.transitions()[entry.event.element].beta_high);
        open.erase(it);
      }
    }
    for (const auto& [t, since] : open) {
      // still producing at the horizon; the timer must agree
      CHECK(trace.final_state.timers[t].is_producing());
      CHECK(trace.final_state.timers[t].clock == trace.final_time - since);
    }
  }
}

TEST_CASE("between relevant states nothing discrete changes") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const auto scenario = fixtures::random_scenario(seed);
    const XtpnNet net(scenario.def);
    FixedSampler sampler(scenario.deadlines.alpha, scenario.deadlines.beta);
    SimConfig config = quick_config(Rat(16));

    NetState z = initial_state(net, sampler);
    for (int steps = 0; steps < 30; ++steps) {
      const auto [delta, due] = next_relevant(net, z);
      if (!delta || z.now + *delta > config.max_time) break;
      if (*delta > Rat(0)) {
        // probe the midpoint: counts and phases must match the pre-state
        const Rat half = Rat(delta->num(), delta->den() * 2);
        const NetState probe = elapse(net, z, half, sampler);
        CHECK(probe.marking.counts() == z.marking.counts());
        for (std::size_t t = 0; t < z.timers.size(); ++t) {
          CHECK(probe.timers[t].phase == z.timers[t].phase);
        }
      }
      const auto emitted = step(net, z, config, sampler);
      CHECK_FALSE(emitted.empty());
    }
  }
}

TEST_CASE("consuming read arcs show the shrunken return in the trace") {
  const XtpnNet net = fixtures::read_arc_cycle();
  FixedSampler sampler({Rat(0)}, {Rat(4)});
  SimConfig config = quick_config(Rat(4));
  config.read_arc_mode = ReadArcMode::ConsumedAged;
  const Trace trace = simulate_with(net, config, sampler);

  REQUIRE(trace.entries.size() >= 2);
  CHECK(trace.entries[0].event.kind == EventKind::ProductionStart);
  CHECK(trace.entries[0].counts[0] == 1);  // four of five taken
  const auto ends = events_of(trace, EventKind::ProductionEnd, 0);
  REQUIRE(ends.size() == 1);
  CHECK(ends[0].at == Rat(4));
  // four were taken, only three fit back under the lifetime bound
  for (const TraceEntry& entry : trace.entries) {
    if (entry.event.kind == EventKind::ProductionEnd) CHECK(entry.counts[0] == 4);
  }
}

TEST_CASE("conflict shuffle changes only the order within a timestamp") {
  NetDef def;
  def.places.push_back({"p", Rat(0), Rat::infinity()});
  def.transitions.push_back({"a", Rat(1), Rat(1), Rat(1), Rat(1)});
  def.transitions.push_back({"b", Rat(1), Rat(1), Rat(1), Rat(1)});
  def.transitions.push_back({"c", Rat(1), Rat(1), Rat(1), Rat(1)});
  def.arcs.push_back({"p", "a", 1, ArcKind::Normal});
  def.arcs.push_back({"p", "b", 1, ArcKind::Normal});
  def.arcs.push_back({"p", "c", 1, ArcKind::Normal});
  def.initial_tokens = {{Rat(0), Rat(0), Rat(0)}};
  const XtpnNet net(std::move(def));

  SimConfig config = quick_config(Rat(3));
  const Trace plain = simulate(net, config);
  REQUIRE(plain.entries.size() >= 3);
  CHECK(plain.entries[0].event.element == 0);
  CHECK(plain.entries[1].event.element == 1);
  CHECK(plain.entries[2].event.element == 2);

  config.conflict_shuffle = true;
  bool reordered = false;
  for (config.seed = 0; config.seed < 16 && !reordered; ++config.seed) {
    const Trace shuffled = simulate(net, config);
    REQUIRE(shuffled.entries.size() >= 3);
    std::vector<std::size_t> order{shuffled.entries[0].event.element,
                                   shuffled.entries[1].event.element,
                                   shuffled.entries[2].event.element};
    if (order != std::vector<std::size_t>{0, 1, 2}) reordered = true;
    // all three still fire at t=1
    for (int k = 0; k < 3; ++k) CHECK(shuffled.entries[k].event.at == Rat(1));
  }
  CHECK(reordered);
}

TEST_CASE("all-duration nets: activation is instant, production lasts d") {
  XtpnNet net = fixtures::producer_consumer();
  for (const std::string id : {"p0"}) {
    net = transform_element(net, id, TransformTarget::ClassicalPlace);
  }
  TransformParams params;
  params.duration = Rat(2);
  for (const std::string id : {"t0", "t1"}) {
    net = transform_element(net, id, TransformTarget::DpnTransition, params);
  }
  REQUIRE(classify_net(net).overall == NetClass::Dpn);

  const Trace trace = simulate(net, quick_config(Rat(30)));
  std::map<std::size_t, Rat> open;
  for (const TraceEntry& entry : trace.entries) {
    if (entry.event.kind == EventKind::ProductionStart) {
      open[entry.event.element] = entry.event.at;
    } else if (entry.event.kind == EventKind::ProductionEnd) {
      CHECK(entry.event.at - open.at(entry.event.element) == Rat(2));
    }
  }
  CHECK(trace.entries.size() > 10);
}
