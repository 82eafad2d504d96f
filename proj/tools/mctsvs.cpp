// Command-line front end: run, bench, recall, regretlab, timing.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mctsvs/config.hpp"
#include "mctsvs/errors.hpp"
#include "mctsvs/experiment.hpp"
#include "mctsvs/regret_lab.hpp"

namespace fs = std::filesystem;

namespace {

void print_summary_line(const mctsvs::ExperimentSummary& s) {
  std::fprintf(stderr, "%-20s %-16s best %.6f +- %.6f  recall %.4f\n", s.problem.c_str(),
               s.method.c_str(), s.mean_final_best, s.std_final_best, s.mean_recall);
}

int cmd_run(const std::string& config_path) {
  const auto config = mctsvs::load_run_config(config_path);
  const auto result = mctsvs::run_experiment(config);
  std::cout << mctsvs::summary_json(result.summary);
  return 0;
}

int cmd_bench(const std::string& suite, const std::string& output, unsigned threads) {
  for (auto config : mctsvs::bench_suite(suite, output)) {
    config.threads = threads;
    const auto result = mctsvs::run_experiment(config);
    print_summary_line(result.summary);
  }
  return 0;
}

int cmd_recall(const std::string& dir) {
  std::cout << mctsvs::recall_json(mctsvs::recall_from_directory(dir));
  return 0;
}

int cmd_regretlab(const std::string& config_path) {
  const auto config = mctsvs::load_lab_config(config_path);
  const auto report = mctsvs::regret::run_regret_lab(config.lab);
  const std::string json = mctsvs::regret::to_json(report);
  if (config.output.empty()) {
    std::cout << json;
  } else {
    if (config.output.has_parent_path()) fs::create_directories(config.output.parent_path());
    std::ofstream out(config.output, std::ios::binary);
    if (!out || !(out << json)) {
      throw mctsvs::IoError("cannot write '" + config.output.string() + "'");
    }
  }
  std::fprintf(stderr, "check (i) held in %d/%d runs\n", report.holds_count(),
               static_cast<int>(report.runs.size()));
  return 0;
}

int cmd_timing(const std::string& path_a, const std::string& path_b, std::int64_t at) {
  auto a = mctsvs::load_run_config(path_a);
  auto b = mctsvs::load_run_config(path_b);
  a.record_timing = true;
  b.record_timing = true;
  const auto ra = mctsvs::run_experiment(a);
  const auto rb = mctsvs::run_experiment(b);
  std::cout << mctsvs::timing_json(mctsvs::compare_timing(ra, rb, at));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MCTS variable selection for high-dimensional black-box optimization"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run an experiment described by a key = value config");
  run->add_option("config", run_config, "Config file")->required();

  std::string suite;
  std::string bench_output = "bench_out";
  unsigned bench_threads = 1;
  auto* bench = app.add_subcommand("bench", "Run a built-in benchmark suite");
  bench->add_option("suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(mctsvs::bench_suite_names()));
  bench->add_option("-o,--output", bench_output, "Output root directory");
  bench->add_option("-j,--threads", bench_threads, "Concurrent seeds (0: all cores)");

  std::string trace_dir;
  auto* recall = app.add_subcommand("recall", "Average recall of the trace CSVs in a directory");
  recall->add_option("trace-dir", trace_dir, "Directory of trace CSVs")->required();

  std::string lab_config;
  auto* lab = app.add_subcommand("regretlab", "Check the variable-selection regret bound");
  lab->add_option("config", lab_config, "Regret-lab config file")->required();

  std::string timing_a;
  std::string timing_b;
  std::int64_t at = 100;
  auto* timing = app.add_subcommand("timing", "Compare per-evaluation wall time of two configs");
  timing->add_option("config-a", timing_a, "First config")->required();
  timing->add_option("config-b", timing_b, "Second config")->required();
  timing->add_option("--at", at, "Evaluation index to compare at")->check(CLI::Range(2, 1 << 30));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_config);
    if (*bench) return cmd_bench(suite, bench_output, bench_threads);
    if (*recall) return cmd_recall(trace_dir);
    if (*lab) return cmd_regretlab(lab_config);
    if (*timing) return cmd_timing(timing_a, timing_b, at);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mctsvs: error: %s\n", e.what());
    return 1;
  }
  return 1;
}
