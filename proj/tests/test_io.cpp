#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "xtpn/io.hpp"

using namespace xtpn;

namespace {

const char* kLoopNet = R"(# one producer, one consumer
place p0 gamma 1 5
trans t0 alpha 2 2 beta 1 4
trans t1 alpha 1 3 beta 2 2
arc t0 -> p0 w 1
arc p0 -> t1 w 1
)";

bool has_error_at(const ParseResult& r, std::size_t line) {
  for (const Diagnostic& d : r.diagnostics) {
    if (d.severity == Severity::Error && d.line == line) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("a structured net file parses to the expected structure") {
  const ParseResult r = parse_net(kLoopNet);
  REQUIRE(r.ok());
  const XtpnNet& net = *r.net;
  REQUIRE(net.places().size() == 1);
  REQUIRE(net.transitions().size() == 2);
  CHECK(net.places()[0].gamma_low == Rat(1));
  CHECK(net.places()[0].gamma_high == Rat(5));
  CHECK(net.transitions()[0].alpha_low == Rat(2));
  CHECK(net.transitions()[1].beta_high == Rat(2));
  CHECK(net.pre_places("t1") == std::set<std::string>{"p0"});
  CHECK(net.post_places("t0") == std::set<std::string>{"p0"});
}

TEST_CASE("arc kinds, token lists and the count shorthand") {
  const ParseResult r = parse_net(
      "place p gamma 0 inf\n"
      "place q gamma 1/2 10\n"
      "trans t alpha 0 1 beta 0 1\n"
      "arc p <-> t w 2\n"
      "arc q -o t w 3\n"
      "tokens p count 2\n"
      "tokens q 1/2 3 10/4\n");
  REQUIRE(r.ok());
  const XtpnNet& net = *r.net;
  CHECK(net.read_inputs(0).size() == 1);
  CHECK(net.inhibitors(0).size() == 1);
  CHECK(net.initial_tokens()[0] == std::vector<Rat>{Rat(0), Rat(0)});
  CHECK(net.initial_tokens()[1] == std::vector<Rat>{Rat(1, 2), Rat(3), Rat(5, 2)});
}

TEST_CASE("validation findings come back with the declaring line") {
  const ParseResult r = parse_net("place p gamma 3 3\n");
  CHECK_FALSE(r.ok());
  CHECK(has_error_at(r, 1));

  const ParseResult arc = parse_net(
      "place p gamma 0 inf\n"
      "trans t alpha 0 1 beta 0 1\n"
      "arc p -> ghost w 1\n");
  CHECK_FALSE(arc.ok());
  CHECK(has_error_at(arc, 3));

  const ParseResult lifetime = parse_net(
      "place p gamma 0 4\n"
      "trans t alpha 0 1 beta 0 1\n"
      "arc p -> t w 1\n"
      "tokens p 9\n");
  CHECK_FALSE(lifetime.ok());
  CHECK(has_error_at(lifetime, 4));
}

TEST_CASE("syntax errors carry line and column") {
  const ParseResult r = parse_net(
      "place p gamma 0 inf\n"
      "splace q gamma 0 1\n"
      "place r gamma 0 oops\n");
  CHECK_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() >= 2);
  CHECK(r.diagnostics[0].line == 2);
  CHECK(r.diagnostics[0].column == 1);
  CHECK(r.diagnostics[1].line == 3);
  CHECK(r.diagnostics[1].column == 17);
}

TEST_CASE("empty and token-only inputs are rejected gently") {
  CHECK_FALSE(parse_net("").ok());
  CHECK(parse_net("").diagnostics[0].message == "no places declared");
  CHECK_FALSE(parse_net("# only a comment\n").ok());
  CHECK_FALSE(parse_net("tokens p 1\n").ok());
}

TEST_CASE("serialization is canonical and round-trips structurally") {
  const ParseResult r = parse_net(kLoopNet);
  REQUIRE(r.ok());
  const std::string canon = serialize_net(*r.net);
  const ParseResult again = parse_net(canon);
  REQUIRE(again.ok());
  CHECK(serialize_net(*again.net) == canon);
  CHECK(again.net->places() == r.net->places());
  CHECK(again.net->transitions() == r.net->transitions());
  CHECK(again.net->arcs() == r.net->arcs());
  CHECK(again.net->initial_tokens() == r.net->initial_tokens());
}

TEST_CASE("round trip holds for generated nets") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto scenario = fixtures::random_scenario(seed);
    const XtpnNet net(scenario.def);
    const std::string text = serialize_net(net);
    CAPTURE(seed);
    const ParseResult r = parse_net(text);
    REQUIRE(r.ok());
    CHECK(r.net->places() == net.places());
    CHECK(r.net->transitions() == net.transitions());
    CHECK(r.net->arcs() == net.arcs());
    // token lists canonicalize sorted
    for (std::size_t p = 0; p < net.places().size(); ++p) {
      std::vector<Rat> want = net.initial_tokens()[p];
      std::sort(want.begin(), want.end());
      CHECK(r.net->initial_tokens()[p] == want);
    }
    CHECK(serialize_net(*r.net) == text);
  }
}

TEST_CASE("the parser survives random bytes") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> len_dist(0, 160);
  std::uniform_int_distribution<int> byte_dist(0, 255);
  const std::string corpus =
      "place trans arc tokens gamma alpha beta w count -> -o <-> inf 1/2 0 # \n\t";
  std::uniform_int_distribution<std::size_t> pick(0, corpus.size() - 1);
  for (int round = 0; round < 20000; ++round) {
    std::string text;
    const int len = len_dist(rng);
    if (round % 2 == 0) {
      for (int i = 0; i < len; ++i) text.push_back(char(byte_dist(rng)));
    } else {
      for (int i = 0; i < len; ++i) text.push_back(corpus[pick(rng)]);
    }
    const ParseResult r = parse_net(text);  // must not throw or crash
    if (r.ok()) CHECK(r.net->places().size() >= 1);
  }
}

TEST_CASE("trace files round-trip into the same stats") {
  const XtpnNet net = fixtures::producer_consumer();
  SimConfig config;
  config.max_time = Rat(25);
  config.seed = 3;
  const Trace trace = simulate(net, config);
  const std::string text = write_trace(trace);

  const TraceFile file = read_trace(text);
  CHECK(file.place_ids == trace.place_ids);
  CHECK(file.transition_ids == trace.transition_ids);
  CHECK(file.entries.size() == trace.entries.size());
  CHECK(file.final_time == trace.final_time);

  const StatsReport direct = collect_stats(trace);
  const StatsReport recomputed = collect_stats(file);
  CHECK(write_stats(direct) == write_stats(recomputed));
}

TEST_CASE("an empty trace still has its header and final block") {
  const XtpnNet net = fixtures::producer_consumer();
  SimConfig config;
  config.max_time = Rat(0);
  const std::string text = write_trace(simulate(net, config));
  CHECK(text.find("xtpn-trace 1\n") == 0);
  CHECK(text.find("final 0\n") != std::string::npos);
  CHECK(text.find("trans t0 active 0 ") != std::string::npos);
  const TraceFile file = read_trace(text);
  CHECK(file.entries.empty());
}

TEST_CASE("malformed traces are rejected with a line number") {
  CHECK_THROWS_AS(read_trace(""), std::runtime_error);
  CHECK_THROWS_AS(read_trace("xtpn-trace 1\nplaces p\ntransitions\ninitial 1\nbogus\n"),
                  std::runtime_error);
  CHECK_THROWS_AS(read_trace("xtpn-trace 1\nplaces p\ntransitions\ninitial 1 2\nfinal 0\n"),
                  std::runtime_error);
}

TEST_CASE("stats report is flat key-value text") {
  const XtpnNet net = fixtures::producer_consumer();
  SimConfig config;
  config.max_time = Rat(10);
  const StatsReport report = collect_stats(simulate(net, config));
  const std::string text = write_stats(report);
  CHECK(text.find("final_time 10\n") != std::string::npos);
  CHECK(text.find("place.p0.max_tokens ") != std::string::npos);
  CHECK(text.find("trans.t0.starts ") != std::string::npos);
  CHECK(text.find("trans.t0.producing_time ") != std::string::npos);
}
