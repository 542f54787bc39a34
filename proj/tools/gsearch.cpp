// gsearch: tournaments, tuning grids, verification suites and reports.
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gsearch/gsearch.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kVerify = 3, kProtocol = 4 };

int exit_code(gsearch_status s) {
  switch (s) {
    case GSEARCH_OK: return kOk;
    case GSEARCH_ERR_CONFIG:
    case GSEARCH_ERR_IO:
    case GSEARCH_ERR_RANGE: return kConfig;
    case GSEARCH_ERR_VERIFY: return kVerify;
    case GSEARCH_ERR_PROTOCOL: return kProtocol;
    default: return kUsage;
  }
}

void print(const char* text, void*) { std::fputs(text, stdout); }

int report_status(gsearch_status s) {
  if (s != GSEARCH_OK) std::cerr << "gsearch: " << gsearch_last_error() << '\n';
  return exit_code(s);
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  double time_per_move = 0;
  std::uint64_t node_budget = 0;
  std::string out;
  bool resume = false;
  std::string format = "md";
  std::string algorithms;
  std::string grid;
  bool dry_run = false;
};

void add_run_flags(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--config", a.config, "tournament config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", a.seed, "override the config seed");
  cmd->add_option("--workers", a.workers, "parallel matches (overrides GSEARCH_WORKERS)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--time-per-move", a.time_per_move, "seconds per move")->check(CLI::PositiveNumber);
  cmd->add_option("--node-budget", a.node_budget, "node/iteration budget per move")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", a.out, "record log path");
  cmd->add_flag("--resume", a.resume, "skip matches already in the record log");
  cmd->add_option("--format", a.format, "report format")->check(CLI::IsMember({"csv", "md"}));
  cmd->add_option("--algorithms", a.algorithms, "candidate specs, e.g. ubfm_s,kbest:k=3");
  cmd->add_flag("--dry-run", a.dry_run, "print the schedule size without playing");
}

gsearch_run_options to_options(const RunArgs& a) {
  gsearch_run_options o;
  gsearch_run_options_init(&o);
  o.config_path = a.config.c_str();
  if (a.seed) {
    o.has_seed = 1;
    o.seed = *a.seed;
  }
  o.workers = a.workers;
  if (!o.workers) {
    if (const char* env = std::getenv("GSEARCH_WORKERS")) o.workers = std::atoi(env);
  }
  o.time_per_move = a.time_per_move;
  o.node_budget = a.node_budget;
  o.out_path = a.out.empty() ? nullptr : a.out.c_str();
  o.resume = a.resume ? 1 : 0;
  o.algorithms = a.algorithms.empty() ? nullptr : a.algorithms.c_str();
  o.grid = a.grid.empty() ? nullptr : a.grid.c_str();
  o.format = a.format.c_str();
  o.dry_run = a.dry_run ? 1 : 0;
  return o;
}

void print_criterion(int id, const char* name, int passed, const char* detail, double seconds, void*) {
  std::printf("[%s] %d. %s (%.1fs): %s\n", passed ? "PASS" : "FAIL", id, name, seconds, detail);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Game-tree search workbench: tournaments, tuning, verification, reports"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run a tournament from a config file");
  add_run_flags(run, run_args);

  RunArgs tune_args;
  auto* tune = app.add_subcommand("tune", "run one tournament per grid value plus a star row");
  add_run_flags(tune, tune_args);
  tune->add_option("--grid", tune_args.grid, "grid, e.g. mcts:C=sqrt2,1,0.3 (default: config [tune] grid)");

  auto* verify = app.add_subcommand("verify", "run the oracle and property suites");

  std::string log_path, report_format = "md";
  std::uint64_t report_seed = 1;
  std::size_t bootstrap = 10000;
  auto* report = app.add_subcommand("report", "summarize a record log");
  report->add_option("log", log_path, "record log (csv)")->required()->check(CLI::ExistingFile);
  report->add_option("--format", report_format, "report format")->check(CLI::IsMember({"csv", "md"}));
  report->add_option("--seed", report_seed, "bootstrap seed");
  report->add_option("--bootstrap", bootstrap, "bootstrap replicates")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*run) {
    const auto o = to_options(run_args);
    return report_status(gsearch_run(&o, print, nullptr));
  }
  if (*tune) {
    const auto o = to_options(tune_args);
    return report_status(gsearch_tune(&o, print, nullptr));
  }
  if (*verify) {
    int failures = 0;
    const auto s = gsearch_verify(print_criterion, nullptr, &failures);
    std::printf("%s\n", failures ? "verification FAILED" : "all suites passed");
    return report_status(s);
  }
  return report_status(gsearch_report(log_path.c_str(), report_format.c_str(), report_seed, bootstrap,
                                      print, nullptr));
}
