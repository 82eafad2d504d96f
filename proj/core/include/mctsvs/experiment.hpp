#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mctsvs/config.hpp"
#include "mctsvs/objective.hpp"
#include "mctsvs/trace.hpp"

namespace mctsvs {

/// Runs the configured method on `spec` for one seed.
RunTrace run_seed(const RunConfig& config, const ObjectiveSpec& spec, std::uint64_t seed);

struct ExperimentSummary {
  std::string problem;
  std::string method;  // method label as recorded in traces, e.g. "mcts_vs_bo"
  std::vector<std::uint64_t> seeds;
  std::vector<double> final_best;
  double mean_final_best = 0.0;
  double std_final_best = 0.0;  // sample standard deviation, 0 for one seed
  double mean_recall = 0.0;
  /// Mean per-evaluation wall time; only filled when timing is recorded.
  double mean_time_per_eval_ms = 0.0;
  bool has_timing = false;
};

struct ExperimentResult {
  std::vector<RunTrace> traces;  // in seed order
  ExperimentSummary summary;
  std::vector<std::filesystem::path> csv_files;
};

ExperimentSummary summarize(const RunConfig& config, const std::vector<RunTrace>& traces);

/// File name of a seed's trace CSV, e.g. "mcts_vs_bo_seed3.csv".
std::string trace_file_name(const RunTrace& trace);

/// Validates the config, runs every seed (concurrently when
/// config.threads != 1) and, when config.output_dir is set, writes one CSV
/// per seed plus summary.json. I/O failures raise IoError with the path.
ExperimentResult run_experiment(const RunConfig& config);

std::string summary_json(const ExperimentSummary& summary);

struct TimingReport {
  std::string label_a;
  std::string label_b;
  std::int64_t at = 0;
  double ms_a = 0.0;  // mean per-evaluation time over (at/2, at], averaged over seeds
  double ms_b = 0.0;
  [[nodiscard]] double ratio() const { return ms_a / ms_b; }
  [[nodiscard]] bool a_faster() const { return ms_a < ms_b; }
};

/// Compares two completed timed experiments near evaluation `at`.
TimingReport compare_timing(const ExperimentResult& a, const ExperimentResult& b, std::int64_t at);

std::string timing_json(const TimingReport& report);

struct RecallEntry {
  std::filesystem::path file;
  double mean_recall = 0.0;
  std::int64_t rows = 0;
};

struct RecallReport {
  std::vector<RecallEntry> files;  // sorted by file name
  double mean_recall = 0.0;
};

/// Reads every *.csv trace in `dir` and averages the recall column over
/// rows not tagged as part of the initial design.
RecallReport recall_from_directory(const std::filesystem::path& dir);

std::string recall_json(const RecallReport& report);

/// Names of the built-in benchmark suites.
std::vector<std::string> bench_suite_names();

/// Configurations of a named suite writing under `output_root/<suite>`.
/// Throws ConfigError for unknown names.
std::vector<RunConfig> bench_suite(const std::string& name,
                                   const std::filesystem::path& output_root);

}  // namespace mctsvs
