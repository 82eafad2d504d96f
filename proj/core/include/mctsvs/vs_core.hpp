#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mctsvs/index_set.hpp"
#include "mctsvs/inner_opt.hpp"
#include "mctsvs/objective.hpp"
#include "mctsvs/random.hpp"
#include "mctsvs/trace.hpp"

namespace mctsvs {

/// Accumulated (variable subset, evaluated batch) pairs.
class InformationSet {
 public:
  struct Entry {
    VariableIndexSet indices;
    std::vector<EvaluatedPoint> samples;
  };

  explicit InformationSet(int dimension);

  /// Throws ArgumentError for an empty batch or an index outside [0, D).
  void add(VariableIndexSet indices, std::vector<EvaluatedPoint> samples);

  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }

  /// True iff every variable index appears in at least one entry.
  [[nodiscard]] bool covers_all() const;

 private:
  int dimension_;
  std::vector<Entry> entries_;
};

/// Variable score: for each i, the average y over all samples whose entry
/// contains i,
///   s = (sum_entries sum_samples y * g(M)) / (sum_entries |samples| * g(M)).
/// Throws CoverageError naming the first index that was never queried.
Eigen::VectorXd variable_score(const InformationSet& info);

/// The k best evaluated points so far, descending by y; ties keep
/// first-seen order.
class BestKBuffer {
 public:
  explicit BestKBuffer(int capacity);

  void update(const std::vector<EvaluatedPoint>& batch);
  void update(const EvaluatedPoint& point);

  [[nodiscard]] int capacity() const { return capacity_; }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const std::vector<EvaluatedPoint>& entries() const { return entries_; }

 private:
  int capacity_;
  std::vector<EvaluatedPoint> entries_;
};

/// Merges a batch into the buffer and returns the result.
BestKBuffer update_best_k(BestKBuffer buffer, const std::vector<EvaluatedPoint>& batch);

enum class FillStrategy { best_k, average_best_k, random_uniform };

const char* to_string(FillStrategy strategy);
FillStrategy fill_strategy_from_string(const std::string& name);

/// Values (box coordinates) for every index not in `selected`.
/// best_k draws each coordinate independently and uniformly from the
/// buffer entries' coordinates; average_best_k uses their mean;
/// random_uniform draws from the coordinate's bounds. Best-k strategies
/// throw StateError on an empty buffer.
std::map<int, double> fill_in(FillStrategy strategy, const VariableIndexSet& selected,
                              const BestKBuffer& buffer, const ObjectiveSpec& spec, Rng& rng);

/// Writes a proposal (unit cube of the subspace) and the fill-in values
/// into one full box-coordinate point.
Eigen::VectorXd assemble_point(const ObjectiveSpec& spec, const VariableIndexSet& selected,
                               const Eigen::VectorXd& unit_subspace_point,
                               const std::map<int, double>& filled);

/// Uniformly random subset of exactly `size` indices from [0, dimension).
VariableIndexSet random_subset_of_size(int dimension, int size, Rng& rng);

struct DropoutConfig {
  int subset_size = 6;  // d
  std::int64_t budget = 600;
  OptimizerKind optimizer = OptimizerKind::gp_bo;
  FillStrategy fill = FillStrategy::best_k;
  int k = 20;
  int batch = 3;  // N_s
  int initial_points = 12;
  std::uint64_t seed = 0;
  ProposeOptions propose;
  HistoryCap history_cap;
};

/// Dropout baseline: each iteration optimizes a uniformly random d-subset
/// of variables and fills the rest. Starts with a Latin hypercube design
/// of `initial_points` points.
RunTrace dropout_run(const ObjectiveSpec& spec, const DropoutConfig& config);

}  // namespace mctsvs
