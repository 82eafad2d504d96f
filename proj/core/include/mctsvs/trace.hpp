#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mctsvs/index_set.hpp"
#include "mctsvs/objective.hpp"

namespace mctsvs {

namespace event {
inline constexpr const char* init = "init";
inline constexpr const char* tree_reinit = "tree_reinit";
inline constexpr const char* split = "split";
inline constexpr const char* no_split = "no_split";
}  // namespace event

struct TraceRecord {
  std::int64_t eval_index = 0;  // 1-based
  Eigen::VectorXd x;
  double y = 0.0;
  double best_y = 0.0;
  VariableIndexSet selected;
  double recall = 0.0;
  /// Cumulative wall time of the run up to this evaluation, excluding time
  /// spent inside the objective.
  double elapsed_ms = 0.0;
  std::vector<std::string> events;
};

struct RunTrace {
  std::string problem;
  std::string method;
  std::uint64_t seed = 0;
  int dimension = 0;
  std::vector<TraceRecord> records;
  int tree_reinits = 0;

  [[nodiscard]] double final_best() const;
  /// Mean of the recall column over rows that are not part of the initial
  /// design. NaN when there are no such rows.
  [[nodiscard]] double mean_recall() const;
  /// Mean per-evaluation wall time over evaluations (at/2, at].
  [[nodiscard]] double mean_time_per_eval_ms(std::int64_t at) const;
};

/// Appends evaluation records while keeping the running best and a clock
/// that stops while the objective is being evaluated.
class TraceRecorder {
 public:
  TraceRecorder(const ObjectiveSpec& spec, std::string method, std::uint64_t seed);

  /// Evaluates x (box coordinates), appends one record and returns y.
  double evaluate(const Eigen::VectorXd& x, const VariableIndexSet& selected, double recall);

  /// Attaches an event tag to the next recorded evaluation.
  void tag_next(std::string event);
  /// Attaches an event tag to the most recent evaluation (or the next one
  /// when nothing has been recorded yet).
  void tag_last(std::string event);

  [[nodiscard]] std::int64_t evaluations() const {
    return static_cast<std::int64_t>(trace_.records.size());
  }
  [[nodiscard]] const RunTrace& trace() const { return trace_; }
  RunTrace& mutable_trace() { return trace_; }
  RunTrace take() { return std::move(trace_); }

 private:
  using Clock = std::chrono::steady_clock;
  const ObjectiveSpec& spec_;
  RunTrace trace_;
  std::vector<std::string> pending_;
  Clock::time_point start_;
  Clock::duration excluded_{0};
};

/// Column order of every trace CSV.
inline constexpr const char* kTraceCsvHeader =
    "seed,eval_index,y,best_y,selected_mask,recall,elapsed_ms,event";

/// Writes one row per evaluation. The elapsed_ms column is left empty when
/// `with_timing` is false so that repeated runs produce identical files.
void write_trace_csv(const RunTrace& trace, const std::filesystem::path& path, bool with_timing);

/// A row read back from a trace CSV (x is not stored in CSVs).
struct CsvRow {
  std::uint64_t seed = 0;
  std::int64_t eval_index = 0;
  double y = 0.0;
  double best_y = 0.0;
  std::string selected_mask;
  double recall = 0.0;
  double elapsed_ms = 0.0;
  bool has_elapsed = false;
  std::vector<std::string> events;
};

std::vector<CsvRow> read_trace_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace mctsvs
