// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "dcn/check/fairness.hpp"
#include "dcn/core/types.hpp"
#include "dcn/sim/config.hpp"
#include "dcn/sim/event_log.hpp"
#include "dcn/sim/kernel.hpp"
#include "dcn/suites/suites.hpp"

namespace dcn::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::size_t kMaxFailuresPrinted = 10;

std::size_t default_jobs() {
  if (const char* env = std::getenv("DCN_JOBS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(p.string(), "cannot write file");
  return out;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    if (!ok) c = '_';
  }
  return s;
}

struct RunOptions {
  std::string scenario;
  std::string suite;
  std::size_t seeds = 0;
  std::size_t jobs = 0;
  std::string out_dir;
  std::string format = "jsonl";
  bool logs = false;
};

int print_summary(const suites::SuiteSummary& s, std::ostream& out) {
  out << s.suite << ": " << s.runs << " runs, " << s.violations << " violations, "
      << (s.passed ? "PASS" : "FAIL") << "\n";
  for (std::size_t i = 0; i < s.failures.size() && i < kMaxFailuresPrinted; ++i) {
    out << "  " << s.failures[i] << "\n";
  }
  return s.passed ? kExitOk : kExitViolations;
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.scenario.empty() == opt.suite.empty()) {
    err << "error: exactly one of --scenario or --suite is required\n";
    return kExitConfig;
  }
  const std::size_t jobs = opt.jobs ? opt.jobs : default_jobs();
  const bool csv = opt.format == "csv";
  fs::path out_dir;
  if (!opt.out_dir.empty()) {
    out_dir = opt.out_dir;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ConfigError(opt.out_dir, "cannot create directory: " + ec.message());
    if (opt.logs) fs::create_directories(out_dir / "logs");
  }

  std::vector<suites::LabeledScenario> scenarios;
  std::string suite_label;
  if (!opt.scenario.empty()) {
    const sim::ScenarioConfig cfg = sim::load_scenario(opt.scenario);
    suite_label = cfg.name.empty() ? fs::path(opt.scenario).stem().string() : cfg.name;
    const std::size_t seeds = opt.seeds ? opt.seeds : 1;
    for (std::size_t i = 0; i < seeds; ++i) {
      sim::ScenarioConfig c = cfg;
      c.seed = cfg.seed + i;
      scenarios.push_back({suite_label, c});
    }
  } else {
    bool known = false;
    for (const auto& n : suites::suite_names()) known |= n == opt.suite;
    if (!known) throw ConfigError("--suite", "unknown suite '" + opt.suite + "'");
    suite_label = opt.suite;
    const std::size_t seeds = opt.seeds ? opt.seeds : 10;
    if (!suites::is_matrix_suite(opt.suite)) {
      const auto summary = suites::run_suite(opt.suite, seeds, jobs);
      if (!out_dir.empty()) open_out(out_dir / "summary.json") << summary.to_json() << "\n";
      return print_summary(summary, out);
    }
    scenarios = suites::matrix_scenarios(opt.suite, seeds);
  }

  std::ofstream reports;
  if (!out_dir.empty()) {
    reports = open_out(out_dir / (csv ? "reports.csv" : "reports.jsonl"));
    if (csv) reports << check::report_csv_header();
  }
  std::size_t index = 0;
  auto on_done = [&](const suites::RunOutcome& o) {
    const std::size_t i = index++;
    if (!reports.is_open()) return;
    if (csv) {
      if (o.error.empty()) reports << check::report_csv_rows(o.report, o.label);
    } else {
      nlohmann::ordered_json j;
      j["scenario"] = o.label;
      j["seed"] = o.config.seed;
      if (o.error.empty()) {
        j["report"] = nlohmann::ordered_json::parse(check::report_json(o.report));
      } else {
        j["error"] = o.error;
      }
      reports << j.dump() << "\n";
    }
    if (opt.logs && o.log) {
      std::ostringstream name;
      name << std::setw(6) << std::setfill('0') << i << "_" << sanitize(o.label) << "_seed"
           << o.config.seed << ".jsonl";
      open_out(out_dir / "logs" / name.str()) << o.log->to_jsonl();
    }
  };
  const auto outcomes = suites::run_all(scenarios, jobs, on_done, opt.logs && !out_dir.empty());
  const auto summary = suites::summarize_matrix(suite_label, outcomes);
  if (!out_dir.empty()) open_out(out_dir / "summary.json") << summary.to_json() << "\n";
  return print_summary(summary, out);
}

struct ComplexityOptions {
  std::string suite = "rounds";
  std::string spreads;
  std::size_t seeds = 10;
  std::size_t jobs = 0;
  std::size_t n = 4;
  std::string mode = "both";
  std::string out_dir;
};

std::vector<std::int64_t> parse_spreads(const std::string& text) {
  if (text.empty()) return suites::default_spreads();
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty() || v < 1 || v > (1LL << 30)) {
      throw ConfigError("--spreads", "bad spread '" + item + "' (want integers in 1..2^30)");
    }
    out.push_back(v);
  }
  return out;
}

int cmd_complexity(const ComplexityOptions& opt, std::ostream& out) {
  if (opt.suite != "rounds" && opt.suite != "rounds-complexity") {
    throw ConfigError("--suite", "complexity supports only 'rounds'");
  }
  if (opt.n < 4 || opt.n > 255) throw ConfigError("--n", "must be in 4..255");
  const auto spreads = parse_spreads(opt.spreads);
  const std::size_t jobs = opt.jobs ? opt.jobs : default_jobs();
  std::vector<bool> modes;
  if (opt.mode == "sync" || opt.mode == "both") modes.push_back(true);
  if (opt.mode == "async" || opt.mode == "both") modes.push_back(false);

  std::ofstream csv;
  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    csv = open_out(fs::path(opt.out_dir) / "complexity.csv");
    csv << "mode,spread,runs,mean_rounds,max_rounds,delivered,violations\n";
  }
  char line[160];
  std::snprintf(line, sizeof(line), "%-6s %10s %6s %12s %11s %10s\n", "mode", "spread", "runs",
                "mean_rounds", "max_rounds", "delivered");
  out << line;
  std::vector<std::string> fits;
  for (bool sync : modes) {
    const char* name = sync ? "sync" : "async";
    const auto points = suites::rounds_complexity(spreads, opt.seeds, jobs, sync, opt.n);
    for (const auto& p : points) {
      std::snprintf(line, sizeof(line), "%-6s %10lld %6zu %12.3f %11u %10zu\n", name,
                    static_cast<long long>(p.spread), p.runs, p.mean_rounds, p.max_rounds,
                    p.delivered);
      out << line;
      if (csv.is_open()) {
        csv << name << ',' << p.spread << ',' << p.runs << ',' << p.mean_rounds << ','
            << p.max_rounds << ',' << p.delivered << ',' << p.violations << "\n";
      }
    }
    for (double offset : {0.0, 2.0}) {
      const auto fit = suites::fit_log2(points, offset);
      std::snprintf(line, sizeof(line),
                    "fit %-5s rounds = %.4f * log2(%s) + %.4f   R^2 = %.4f\n", name, fit.slope,
                    offset == 0.0 ? "spread" : "2 + spread", fit.intercept, fit.r2);
      fits.emplace_back(line);
    }
  }
  for (const auto& f : fits) out << f;
  return kExitOk;
}

int cmd_check(const std::string& log_path, std::ostream& out) {
  const auto log = sim::EventLog::from_jsonl(read_file(log_path));
  const auto report = check::analyze(log);
  out << check::report_json(report) << "\n";
  return report.clean() ? kExitOk : kExitViolations;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const auto cfg = sim::resolve(sim::load_scenario(path));
  out << sim::to_json(cfg) << "\n";
  return kExitOk;
}

}  // namespace

int dcn_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decentralized clock network simulator and fairness checker", "dcn"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file or a built-in suite");
  auto* scen_opt = run_cmd->add_option("--scenario", run.scenario, "Scenario JSON file");
  auto* suite_opt = run_cmd->add_option("--suite", run.suite, "Built-in suite name")
                        ->check(CLI::IsMember(suites::suite_names()));
  scen_opt->excludes(suite_opt);
  run_cmd->add_option("--seeds", run.seeds, "Seeds per scenario")->check(CLI::PositiveNumber);
  run_cmd->add_option("--jobs", run.jobs, "Worker threads (default: $DCN_JOBS or all cores)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out_dir, "Output directory for reports");
  run_cmd->add_option("--format", run.format, "Report format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  run_cmd->add_flag("--logs", run.logs, "Also write each run's event log under OUT/logs");

  ComplexityOptions cx;
  auto* cx_cmd = app.add_subcommand("complexity", "Sweep receipt spreads and fit rounds");
  cx_cmd->add_option("--suite", cx.suite, "Sweep to run (rounds)");
  cx_cmd->add_option("--spreads", cx.spreads, "Comma separated spreads (default 2^0..2^14)");
  cx_cmd->add_option("--seeds", cx.seeds, "Seeds per spread")->check(CLI::PositiveNumber);
  cx_cmd->add_option("--jobs", cx.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cx_cmd->add_option("--n", cx.n, "Network size");
  cx_cmd->add_option("--mode", cx.mode, "Scheduler family")
      ->check(CLI::IsMember({"sync", "async", "both"}));
  cx_cmd->add_option("--out", cx.out_dir, "Directory for complexity.csv");

  std::string log_path;
  auto* check_cmd = app.add_subcommand("check", "Re-check a saved event log");
  check_cmd->add_option("--log", log_path, "Event log in JSONL form")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Validate a scenario file");
  validate_cmd->add_option("--scenario", validate_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run, out, err);
    if (cx_cmd->parsed()) return cmd_complexity(cx, out);
    if (check_cmd->parsed()) return cmd_check(log_path, out);
    if (validate_cmd->parsed()) return cmd_validate(validate_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace dcn::cli
