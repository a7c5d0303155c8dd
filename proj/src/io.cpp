#include "xtpn/io.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <stdexcept>

namespace xtpn {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
           line[i] != '#') {
      ++i;
    }
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (const char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  if (text.empty() || text.size() > 18) return std::nullopt;
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

class NetParser {
 public:
  explicit NetParser(std::string_view text) : text_(text) {}

  ParseResult run();

 private:
  void error(std::size_t line, std::size_t col, std::string message) {
    result_.diagnostics.push_back({line, col, std::move(message), Severity::Error});
  }

  std::optional<Rat> time_value(std::size_t line, const Token& tok) {
    auto r = Rat::parse(tok.text);
    if (!r) error(line, tok.column, "expected a time value (num, num/den or inf)");
    return r;
  }

  void parse_line(std::size_t lineno, const std::vector<Token>& toks);

  std::string_view text_;
  ParseResult result_;
  NetDef def_;
  std::map<std::string, std::size_t, std::less<>> place_slot_;
  std::map<std::string, std::size_t, std::less<>> decl_line_;   // element id -> line
  std::vector<std::size_t> arc_line_;                            // parallel to def_.arcs
  std::map<std::string, std::size_t, std::less<>> tokens_line_;  // place id -> first tokens line
};

void NetParser::parse_line(std::size_t lineno, const std::vector<Token>& toks) {
  const auto expect_count = [&](std::size_t want) {
    if (toks.size() == want) return true;
    if (toks.size() < want) {
      error(lineno, toks.back().column, "truncated directive");
    } else {
      error(lineno, toks[want].column, "unexpected trailing token '" +
                                           std::string(toks[want].text) + "'");
    }
    return false;
  };

  const std::string_view head = toks[0].text;
  if (head == "xtpn") {
    if (!expect_count(2)) return;
    const auto version = parse_int(toks[1].text);
    if (!version || *version != 1) error(lineno, toks[1].column, "unsupported format version");
    return;
  }
  if (head == "place") {
    if (!expect_count(5)) return;
    if (toks[2].text != "gamma") {
      error(lineno, toks[2].column, "expected 'gamma'");
      return;
    }
    if (!valid_id(toks[1].text)) {
      error(lineno, toks[1].column, "invalid identifier");
      return;
    }
    const auto lo = time_value(lineno, toks[3]);
    const auto hi = time_value(lineno, toks[4]);
    if (!lo || !hi) return;
    const std::string id(toks[1].text);
    place_slot_.emplace(id, def_.places.size());
    decl_line_.emplace(id, lineno);
    def_.places.push_back({id, *lo, *hi});
    def_.initial_tokens.emplace_back();
    return;
  }
  if (head == "trans") {
    if (!expect_count(8)) return;
    if (toks[2].text != "alpha") {
      error(lineno, toks[2].column, "expected 'alpha'");
      return;
    }
    if (toks[5].text != "beta") {
      error(lineno, toks[5].column, "expected 'beta'");
      return;
    }
    if (!valid_id(toks[1].text)) {
      error(lineno, toks[1].column, "invalid identifier");
      return;
    }
    const auto alo = time_value(lineno, toks[3]);
    const auto ahi = time_value(lineno, toks[4]);
    const auto blo = time_value(lineno, toks[6]);
    const auto bhi = time_value(lineno, toks[7]);
    if (!alo || !ahi || !blo || !bhi) return;
    const std::string id(toks[1].text);
    decl_line_.emplace(id, lineno);
    def_.transitions.push_back({id, *alo, *ahi, *blo, *bhi});
    return;
  }
  if (head == "arc") {
    if (toks.size() < 6) {
      error(lineno, toks.back().column, "truncated directive");
      return;
    }
    const std::string_view connector = toks[2].text;
    ArcKind kind;
    if (connector == "->") {
      kind = ArcKind::Normal;
    } else if (connector == "-o") {
      kind = ArcKind::Inhibitor;
    } else if (connector == "<->") {
      kind = ArcKind::Read;
    } else {
      error(lineno, toks[2].column, "expected '->', '-o' or '<->'");
      return;
    }
    if (toks[4].text != "w") {
      error(lineno, toks[4].column, "expected 'w'");
      return;
    }
    const auto weight = parse_int(toks[5].text);
    if (!weight || *weight < 1) {
      error(lineno, toks[5].column, "expected a positive integer weight");
      return;
    }
    std::size_t want = 6;
    if (toks.size() > 6 && toks[6].text == "normal" && kind == ArcKind::Normal) want = 7;
    if (!expect_count(want)) return;
    if (!valid_id(toks[1].text) || !valid_id(toks[3].text)) {
      error(lineno, toks[1].column, "invalid identifier");
      return;
    }
    arc_line_.push_back(lineno);
    def_.arcs.push_back({std::string(toks[1].text), std::string(toks[3].text), *weight, kind});
    return;
  }
  if (head == "tokens") {
    if (toks.size() < 2) {
      error(lineno, toks.back().column, "truncated directive");
      return;
    }
    const auto slot = place_slot_.find(toks[1].text);
    if (slot == place_slot_.end()) {
      error(lineno, toks[1].column, "tokens for undeclared place '" +
                                        std::string(toks[1].text) + "'");
      return;
    }
    tokens_line_.emplace(std::string(toks[1].text), lineno);
    if (toks.size() >= 3 && toks[2].text == "count") {
      if (!expect_count(4)) return;
      const auto n = parse_int(toks[3].text);
      if (!n || *n < 0 || *n > 1000000) {
        error(lineno, toks[3].column, "expected a token count between 0 and 1000000");
        return;
      }
      auto& list = def_.initial_tokens[slot->second];
      list.insert(list.end(), std::size_t(*n), Rat(0));
      return;
    }
    for (std::size_t i = 2; i < toks.size(); ++i) {
      const auto life = time_value(lineno, toks[i]);
      if (!life) return;
      def_.initial_tokens[slot->second].push_back(*life);
    }
    return;
  }
  error(lineno, toks[0].column, "unknown directive '" + std::string(head) + "'");
}

ParseResult NetParser::run() {
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text_.size()) {
    const std::size_t eol = text_.find('\n', pos);
    const std::string_view line =
        text_.substr(pos, eol == std::string_view::npos ? text_.size() - pos : eol - pos);
    ++lineno;
    const auto toks = tokenize(line);
    if (!toks.empty()) {
      parse_line(lineno, toks);
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }

  if (def_.places.empty() && result_.diagnostics.empty()) {
    result_.diagnostics.push_back({0, 0, "no places declared", Severity::Error});
    return std::move(result_);
  }

  XtpnNet net(std::move(def_));
  const auto line_of = [&](const std::string& element) -> std::size_t {
    if (const auto it = decl_line_.find(element); it != decl_line_.end()) return it->second;
    return 0;
  };
  for (const Violation& v : validate(net)) {
    std::size_t line = 0;
    if (v.rule == "initial lifetime") {
      if (const auto it = tokens_line_.find(v.element); it != tokens_line_.end()) {
        line = it->second;
      }
    }
    if (line == 0) line = line_of(v.element);
    if (line == 0) {
      // arcs are reported as "src -> dst"; match them up in declaration order
      for (std::size_t i = 0; i < net.arcs().size(); ++i) {
        const Arc& a = net.arcs()[i];
        if (a.source + " -> " + a.target == v.element) {
          line = arc_line_[i];
          break;
        }
      }
    }
    result_.diagnostics.push_back({line, 1, v.rule + ": " + v.message, v.severity});
  }

  bool has_error = false;
  for (const Diagnostic& d : result_.diagnostics) has_error |= (d.severity == Severity::Error);
  if (!has_error) result_.net.emplace(std::move(net));
  return std::move(result_);
}

const char* arc_connector(ArcKind kind) {
  switch (kind) {
    case ArcKind::Normal: return "->";
    case ArcKind::Inhibitor: return "-o";
    case ArcKind::Read: return "<->";
  }
  return "?";
}

}  // namespace

ParseResult parse_net(std::string_view text) { return NetParser(text).run(); }

std::string serialize_net(const XtpnNet& net) {
  std::ostringstream out;
  out << "xtpn 1\n";
  for (const PlaceSpec& p : net.places()) {
    out << "place " << p.id << " gamma " << p.gamma_low.str() << " " << p.gamma_high.str()
        << "\n";
  }
  for (const TransitionSpec& t : net.transitions()) {
    out << "trans " << t.id << " alpha " << t.alpha_low.str() << " " << t.alpha_high.str()
        << " beta " << t.beta_low.str() << " " << t.beta_high.str() << "\n";
  }
  for (const Arc& a : net.arcs()) {
    out << "arc " << a.source << " " << arc_connector(a.kind) << " " << a.target << " w "
        << a.weight << "\n";
  }
  for (std::size_t p = 0; p < net.places().size(); ++p) {
    const auto& lifetimes = net.initial_tokens()[p];
    if (lifetimes.empty()) continue;
    std::vector<Rat> sorted = lifetimes;
    std::sort(sorted.begin(), sorted.end());
    out << "tokens " << net.places()[p].id;
    for (const Rat& life : sorted) out << " " << life.str();
    out << "\n";
  }
  return std::move(out).str();
}

std::string write_trace(const Trace& trace) {
  std::ostringstream out;
  out << "xtpn-trace 1\n";
  out << "places";
  for (const std::string& id : trace.place_ids) out << " " << id;
  out << "\ntransitions";
  for (const std::string& id : trace.transition_ids) out << " " << id;
  out << "\ninitial";
  for (const std::int64_t c : trace.initial_counts) out << " " << c;
  out << "\n";
  for (const TraceEntry& entry : trace.entries) {
    const bool place_side =
        entry.event.kind == EventKind::Maturity || entry.event.kind == EventKind::Expiry;
    const std::string& id = place_side ? trace.place_ids[entry.event.element]
                                       : trace.transition_ids[entry.event.element];
    out << entry.event.at.str() << " " << event_kind_name(entry.event.kind) << " " << id << " "
        << entry.event.detail.str() << " |";
    for (const std::int64_t c : entry.counts) out << " " << c;
    out << "\n";
  }
  out << "final " << trace.final_time.str() << "\n";
  for (std::size_t p = 0; p < trace.place_ids.size(); ++p) {
    out << "place " << trace.place_ids[p];
    for (const Rat& life : trace.final_state.marking.bag(p).elements()) {
      out << " " << life.str();
    }
    out << "\n";
  }
  for (std::size_t t = 0; t < trace.transition_ids.size(); ++t) {
    const TransitionTimer& timer = trace.final_state.timers[t];
    out << "trans " << trace.transition_ids[t];
    switch (timer.phase) {
      case TransitionTimer::Phase::Inactive:
        out << " inactive";
        break;
      case TransitionTimer::Phase::Active:
        out << " active " << timer.clock.str() << " " << timer.deadline.str();
        break;
      case TransitionTimer::Phase::Producing:
        out << " producing " << timer.clock.str() << " " << timer.deadline.str();
        break;
    }
    out << "\n";
  }
  return std::move(out).str();
}

namespace {

[[noreturn]] void trace_error(std::size_t line, const std::string& message) {
  throw std::runtime_error("trace line " + std::to_string(line) + ": " + message);
}

Rat need_rat(std::size_t line, std::string_view text) {
  const auto r = Rat::parse(text);
  if (!r) trace_error(line, "bad time value '" + std::string(text) + "'");
  return *r;
}

std::int64_t need_int(std::size_t line, std::string_view text) {
  const auto v = parse_int(text);
  if (!v) trace_error(line, "bad integer '" + std::string(text) + "'");
  return *v;
}

}  // namespace

TraceFile read_trace(std::string_view text) {
  TraceFile file;
  std::vector<std::pair<std::size_t, std::vector<Token>>> lines;
  {
    std::size_t lineno = 0, pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = text.find('\n', pos);
      const std::string_view line =
          text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
      ++lineno;
      auto toks = tokenize(line);
      if (!toks.empty()) lines.emplace_back(lineno, std::move(toks));
      if (eol == std::string_view::npos) break;
      pos = eol + 1;
    }
  }
  std::size_t i = 0;
  const auto have = [&] { return i < lines.size(); };
  if (!have() || lines[i].second[0].text != "xtpn-trace") trace_error(1, "missing header");
  ++i;
  if (!have() || lines[i].second[0].text != "places") trace_error(lines[i - 1].first, "missing places");
  for (std::size_t k = 1; k < lines[i].second.size(); ++k) {
    file.place_ids.emplace_back(lines[i].second[k].text);
  }
  ++i;
  if (!have() || lines[i].second[0].text != "transitions") {
    trace_error(lines[i - 1].first, "missing transitions");
  }
  for (std::size_t k = 1; k < lines[i].second.size(); ++k) {
    file.transition_ids.emplace_back(lines[i].second[k].text);
  }
  ++i;
  if (!have() || lines[i].second[0].text != "initial") {
    trace_error(lines[i - 1].first, "missing initial counts");
  }
  for (std::size_t k = 1; k < lines[i].second.size(); ++k) {
    file.initial_counts.push_back(need_int(lines[i].first, lines[i].second[k].text));
  }
  if (file.initial_counts.size() != file.place_ids.size()) {
    trace_error(lines[i].first, "initial count arity mismatch");
  }
  ++i;
  while (have() && lines[i].second[0].text != "final") {
    const auto& [lineno, toks] = lines[i];
    if (toks.size() < 5) trace_error(lineno, "truncated event");
    TraceFileEntry entry;
    entry.time = need_rat(lineno, toks[0].text);
    entry.kind = std::string(toks[1].text);
    entry.element = std::string(toks[2].text);
    entry.detail = need_rat(lineno, toks[3].text);
    if (toks[4].text != "|") trace_error(lineno, "expected '|'");
    for (std::size_t k = 5; k < toks.size(); ++k) {
      entry.counts.push_back(need_int(lineno, toks[k].text));
    }
    if (entry.counts.size() != file.place_ids.size()) {
      trace_error(lineno, "count arity mismatch");
    }
    file.entries.push_back(std::move(entry));
    ++i;
  }
  if (!have()) trace_error(lines.empty() ? 1 : lines.back().first, "missing final block");
  if (lines[i].second.size() != 2) trace_error(lines[i].first, "bad final line");
  file.final_time = need_rat(lines[i].first, lines[i].second[1].text);
  return file;
}

StatsReport collect_stats(const TraceFile& file) {
  StatsReport report;
  report.place_ids = file.place_ids;
  report.transition_ids = file.transition_ids;
  report.final_time = file.final_time;
  report.events = std::int64_t(file.entries.size());
  report.places.resize(file.place_ids.size());
  report.transitions.resize(file.transition_ids.size());
  for (std::size_t p = 0; p < report.places.size(); ++p) {
    report.places[p].min_tokens = file.initial_counts[p];
    report.places[p].max_tokens = file.initial_counts[p];
    report.places[p].final_tokens = file.initial_counts[p];
  }
  const auto place_slot = [&](const std::string& id) -> std::optional<std::size_t> {
    const auto it = std::find(file.place_ids.begin(), file.place_ids.end(), id);
    if (it == file.place_ids.end()) return std::nullopt;
    return std::size_t(it - file.place_ids.begin());
  };
  const auto trans_slot = [&](const std::string& id) -> std::optional<std::size_t> {
    const auto it = std::find(file.transition_ids.begin(), file.transition_ids.end(), id);
    if (it == file.transition_ids.end()) return std::nullopt;
    return std::size_t(it - file.transition_ids.begin());
  };
  for (const TraceFileEntry& entry : file.entries) {
    for (std::size_t p = 0; p < entry.counts.size(); ++p) {
      report.places[p].min_tokens = std::min(report.places[p].min_tokens, entry.counts[p]);
      report.places[p].max_tokens = std::max(report.places[p].max_tokens, entry.counts[p]);
      report.places[p].final_tokens = entry.counts[p];
    }
    if (entry.kind == "Expiry") {
      if (const auto p = place_slot(entry.element)) report.places[*p].expired += 1;
    } else if (entry.kind == "ProductionStart") {
      if (const auto t = trans_slot(entry.element)) report.transitions[*t].starts += 1;
    } else if (entry.kind == "ProductionEnd") {
      if (const auto t = trans_slot(entry.element)) {
        report.transitions[*t].producing_time += entry.detail;
      }
    }
  }
  return report;
}

std::string write_stats(const StatsReport& report) {
  std::ostringstream out;
  out << "xtpn-stats 1\n";
  out << "final_time " << report.final_time.str() << "\n";
  out << "events " << report.events << "\n";
  for (std::size_t p = 0; p < report.place_ids.size(); ++p) {
    const std::string& id = report.place_ids[p];
    out << "place." << id << ".min_tokens " << report.places[p].min_tokens << "\n";
    out << "place." << id << ".max_tokens " << report.places[p].max_tokens << "\n";
    out << "place." << id << ".expired " << report.places[p].expired << "\n";
    out << "place." << id << ".final_tokens " << report.places[p].final_tokens << "\n";
  }
  for (std::size_t t = 0; t < report.transition_ids.size(); ++t) {
    const std::string& id = report.transition_ids[t];
    out << "trans." << id << ".starts " << report.transitions[t].starts << "\n";
    out << "trans." << id << ".producing_time " << report.transitions[t].producing_time.str()
        << "\n";
  }
  return std::move(out).str();
}

}  // namespace xtpn
