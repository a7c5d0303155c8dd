#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "xtpn/engine.hpp"
#include "xtpn/io.hpp"
#include "xtpn/net.hpp"
#include "xtpn/oracle.hpp"
#include "xtpn/transform.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsageError = 2;

bool use_color() {
  const char* env = std::getenv("XTPN_COLOR");
  return env == nullptr || std::string_view(env) != "0";
}

std::string paint(const char* code, const std::string& text) {
  if (!use_color()) return text;
  return std::string("\033[") + code + "m" + text + "\033[0m";
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return bool(out);
}

void print_diagnostics(const xtpn::ParseResult& parsed, const std::string& path) {
  for (const xtpn::Diagnostic& d : parsed.diagnostics) {
    const bool err = d.severity == xtpn::Severity::Error;
    std::ostringstream where;
    where << path;
    if (d.line > 0) where << ":" << d.line << ":" << d.column;
    std::cerr << where.str() << ": " << paint(err ? "31" : "33", err ? "error" : "warning")
              << ": " << d.message << "\n";
  }
}

// Loads and fully validates a net file; nullopt means diagnostics were
// printed and the caller should exit with a domain failure.
std::optional<xtpn::XtpnNet> load_net(const std::string& path) {
  const auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return std::nullopt;
  }
  auto parsed = xtpn::parse_net(*text);
  print_diagnostics(parsed, path);
  if (!parsed.ok()) return std::nullopt;
  return std::move(parsed.net);
}

struct SimulateOptions {
  std::string net_path;
  std::uint64_t seed = 0;
  std::string max_time;
  std::int64_t resolution = 1000;
  std::string horizon_cap = "1000";
  std::string removal_policy = "oldest";
  std::string read_arc_mode = "1";
  std::string trace_path;
  std::string stats_path;
  std::int64_t replications = 1;
  bool conflict_shuffle = false;
};

std::optional<xtpn::SimConfig> build_config(const SimulateOptions& opt) {
  xtpn::SimConfig config;
  config.seed = opt.seed;
  const auto max_time = xtpn::Rat::parse(opt.max_time);
  if (!max_time || max_time->is_infinite()) {
    std::cerr << "error: --max-time must be a finite rational\n";
    return std::nullopt;
  }
  config.max_time = *max_time;
  const auto cap = xtpn::Rat::parse(opt.horizon_cap);
  if (!cap || cap->is_infinite()) {
    std::cerr << "error: --horizon-cap must be a finite rational\n";
    return std::nullopt;
  }
  config.horizon_cap = *cap;
  if (opt.resolution < 1) {
    std::cerr << "error: --resolution must be >= 1\n";
    return std::nullopt;
  }
  config.resolution = opt.resolution;
  if (opt.removal_policy == "oldest") {
    config.removal.kind = xtpn::RemovalKind::Oldest;
  } else if (opt.removal_policy == "youngest") {
    config.removal.kind = xtpn::RemovalKind::Youngest;
  } else if (opt.removal_policy == "random") {
    config.removal.kind = xtpn::RemovalKind::Random;
    config.removal.seed = opt.seed;
  } else {
    std::cerr << "error: --removal-policy must be oldest, youngest or random\n";
    return std::nullopt;
  }
  if (opt.read_arc_mode == "1") {
    config.read_arc_mode = xtpn::ReadArcMode::NotConsumed;
  } else if (opt.read_arc_mode == "2i") {
    config.read_arc_mode = xtpn::ReadArcMode::ConsumedFresh;
  } else if (opt.read_arc_mode == "2ii") {
    config.read_arc_mode = xtpn::ReadArcMode::ConsumedAged;
  } else {
    std::cerr << "error: --read-arc-mode must be 1, 2i or 2ii\n";
    return std::nullopt;
  }
  config.conflict_shuffle = opt.conflict_shuffle;
  return config;
}

int run_validate(const std::string& path) {
  const auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return kDomainFailure;
  }
  const auto parsed = xtpn::parse_net(*text);
  print_diagnostics(parsed, path);
  if (!parsed.ok()) return kDomainFailure;
  std::cout << paint("32", "ok") << ": " << parsed.net->places().size() << " places, "
            << parsed.net->transitions().size() << " transitions, "
            << parsed.net->arcs().size() << " arcs\n";
  return kOk;
}

int run_simulate(const SimulateOptions& opt) {
  const auto net = load_net(opt.net_path);
  if (!net) return kDomainFailure;
  const auto config = build_config(opt);
  if (!config) return kUsageError;
  if (opt.replications < 1) {
    std::cerr << "error: --replications must be >= 1\n";
    return kUsageError;
  }
  if (opt.replications > 1 && opt.trace_path.empty()) {
    std::cerr << "error: --replications needs --trace to name the output files\n";
    return kUsageError;
  }

  if (opt.replications == 1) {
    try {
      const xtpn::Trace trace = xtpn::simulate(*net, *config);
      const std::string rendered = xtpn::write_trace(trace);
      if (opt.trace_path.empty()) {
        std::cout << rendered;
      } else if (!write_file(opt.trace_path, rendered)) {
        std::cerr << "error: cannot write " << opt.trace_path << "\n";
        return kDomainFailure;
      }
      if (!opt.stats_path.empty()) {
        const std::string stats = xtpn::write_stats(xtpn::collect_stats(trace));
        if (!write_file(opt.stats_path, stats)) {
          std::cerr << "error: cannot write " << opt.stats_path << "\n";
          return kDomainFailure;
        }
      }
    } catch (const std::exception& e) {
      std::cerr << "simulation failed: " << e.what() << "\n";
      return kDomainFailure;
    }
    return kOk;
  }

  // independent replications, one thread each, numbered outputs
  std::vector<std::string> failures(opt.replications);
  std::vector<std::thread> workers;
  for (std::int64_t i = 0; i < opt.replications; ++i) {
    workers.emplace_back([&, i] {
      xtpn::SimConfig local = *config;
      local.seed = config->seed + std::uint64_t(i);
      if (local.removal.kind == xtpn::RemovalKind::Random) local.removal.seed = local.seed;
      try {
        const xtpn::Trace trace = xtpn::simulate(*net, local);
        const std::string suffix = "." + std::to_string(i);
        if (!write_file(opt.trace_path + suffix, xtpn::write_trace(trace))) {
          failures[i] = "cannot write " + opt.trace_path + suffix;
          return;
        }
        if (!opt.stats_path.empty()) {
          const std::string stats = xtpn::write_stats(xtpn::collect_stats(trace));
          if (!write_file(opt.stats_path + suffix, stats)) {
            failures[i] = "cannot write " + opt.stats_path + suffix;
          }
        }
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    });
  }
  for (std::thread& w : workers) w.join();
  int code = kOk;
  for (std::int64_t i = 0; i < opt.replications; ++i) {
    if (!failures[i].empty()) {
      std::cerr << "replication " << i << " failed: " << failures[i] << "\n";
      code = kDomainFailure;
    }
  }
  return code;
}

int run_classify(const std::string& path) {
  const auto net = load_net(path);
  if (!net) return kDomainFailure;
  const xtpn::NetClassReport report = xtpn::classify_net(*net);
  for (const auto& [id, c] : report.places) {
    std::cout << "place " << id << ": " << xtpn::class_name(c) << "\n";
  }
  for (const auto& [id, c] : report.transitions) {
    std::cout << "trans " << id << ": " << xtpn::class_name(c) << "\n";
  }
  std::cout << "overall: " << xtpn::class_name(report.overall) << "\n";
  return kOk;
}

struct TransformOptions {
  std::string net_path;
  std::string element;
  std::string target;
  std::string duration, alpha_low, alpha_high, beta_low, beta_high;
  std::string out_path;
};

int run_transform(const TransformOptions& opt) {
  const auto net = load_net(opt.net_path);
  if (!net) return kDomainFailure;
  const auto target = xtpn::parse_transform_target(opt.target);
  if (!target) {
    std::cerr << "error: --to must be one of classical-place, tpn, itpn, dpn, "
                 "classical-transition\n";
    return kUsageError;
  }
  xtpn::TransformParams params;
  const auto set = [](const std::string& text, std::optional<xtpn::Rat>& slot,
                      const char* flag) {
    if (text.empty()) return true;
    const auto value = xtpn::Rat::parse(text);
    if (!value) {
      std::cerr << "error: " << flag << " must be a rational or inf\n";
      return false;
    }
    slot = *value;
    return true;
  };
  if (!set(opt.duration, params.duration, "--duration") ||
      !set(opt.alpha_low, params.alpha_low, "--alpha-low") ||
      !set(opt.alpha_high, params.alpha_high, "--alpha-high") ||
      !set(opt.beta_low, params.beta_low, "--beta-low") ||
      !set(opt.beta_high, params.beta_high, "--beta-high")) {
    return kUsageError;
  }
  try {
    const xtpn::XtpnNet transformed =
        xtpn::transform_element(*net, opt.element, *target, params);
    if (!write_file(opt.out_path, xtpn::serialize_net(transformed))) {
      std::cerr << "error: cannot write " << opt.out_path << "\n";
      return kDomainFailure;
    }
  } catch (const xtpn::TransformError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kOk;
}

int run_stats(const std::string& path) {
  const auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return kDomainFailure;
  }
  try {
    std::cout << xtpn::write_stats(xtpn::collect_stats(xtpn::read_trace(*text)));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extended time Petri net simulator"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a net file");
  validate->add_option("net", validate_path, "net file")->required();

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "run the event-driven engine");
  simulate->add_option("net", sim.net_path, "net file")->required();
  simulate->add_option("--seed", sim.seed, "rng seed");
  simulate->add_option("--max-time", sim.max_time, "simulation horizon (rational)")->required();
  simulate->add_option("--resolution", sim.resolution, "deadline sampling grid denominator");
  simulate->add_option("--horizon-cap", sim.horizon_cap,
                       "deadline span used for infinite interval bounds");
  simulate->add_option("--removal-policy", sim.removal_policy, "oldest|youngest|random");
  simulate->add_option("--read-arc-mode", sim.read_arc_mode, "1|2i|2ii");
  simulate->add_option("--trace", sim.trace_path, "trace output path (stdout when absent)");
  simulate->add_option("--stats", sim.stats_path, "stats output path");
  simulate->add_option("--replications", sim.replications,
                       "independent seeded runs writing numbered trace files");
  simulate->add_flag("--conflict-shuffle", sim.conflict_shuffle,
                     "seeded order for simultaneous production starts");

  std::string classify_path;
  CLI::App* classify = app.add_subcommand("classify", "report element and net classes");
  classify->add_option("net", classify_path, "net file")->required();

  TransformOptions tf;
  CLI::App* transform = app.add_subcommand("transform", "rewrite an element's intervals");
  transform->add_option("net", tf.net_path, "net file")->required();
  transform->add_option("--element", tf.element, "element id")->required();
  transform->add_option("--to", tf.target, "target class")->required();
  transform->add_option("--duration", tf.duration, "production time for dpn");
  transform->add_option("--alpha-low", tf.alpha_low, "activation lower bound for tpn");
  transform->add_option("--alpha-high", tf.alpha_high, "activation upper bound for tpn");
  transform->add_option("--beta-low", tf.beta_low, "production lower bound for itpn");
  transform->add_option("--beta-high", tf.beta_high, "production upper bound for itpn");
  transform->add_option("-o,--output", tf.out_path, "output net file")->required();

  std::string stats_path;
  CLI::App* stats = app.add_subcommand("stats", "recompute a report from a stored trace");
  stats->add_option("trace", stats_path, "trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  if (validate->parsed()) return run_validate(validate_path);
  if (simulate->parsed()) return run_simulate(sim);
  if (classify->parsed()) return run_classify(classify_path);
  if (transform->parsed()) return run_transform(tf);
  if (stats->parsed()) return run_stats(stats_path);
  return kUsageError;
}
