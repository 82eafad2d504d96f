#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mctsvs/gp.hpp"
#include "mctsvs/index_set.hpp"
#include "mctsvs/random.hpp"

namespace mctsvs {

enum class OptimizerKind { gp_bo, random_search };

const char* to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(const std::string& name);

/// Every evaluated point of a run, stored in unit-cube coordinates
/// (one column per evaluation) in evaluation order.
class EvaluationHistory {
 public:
  explicit EvaluationHistory(int dimension);

  void append(const Eigen::VectorXd& unit_x, double y);

  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] Eigen::Index size() const { return count_; }
  [[nodiscard]] auto points() const { return points_.leftCols(count_); }
  [[nodiscard]] auto values() const { return values_.head(count_); }

 private:
  int dimension_;
  Eigen::Index count_ = 0;
  Eigen::MatrixXd points_;
  Eigen::VectorXd values_;
};

/// Evaluated points projected onto the coordinates in `indices`.
struct SubspaceHistory {
  VariableIndexSet indices;
  Eigen::MatrixXd points;  // |indices| x n, unit cube
  Eigen::VectorXd values;
};

struct HistoryCap {
  /// Keep at most this many most recent points ...
  int recent = 500;
  /// ... plus this many best-valued points (when not already kept).
  int best = 20;
};

/// Projects the history onto `indices`, applying the cap when the history
/// is longer than `cap.recent`.
SubspaceHistory project_history(const EvaluationHistory& history, const VariableIndexSet& indices,
                                const HistoryCap& cap = {});

struct ProposeOptions {
  gp::FitOptions fit;
  /// 0 selects acquisition::default_candidate_count(|M|).
  int candidates = 0;
};

struct Proposal {
  Eigen::MatrixXd points;  // |M| x batch, unit cube
  std::optional<gp::KernelParams> fitted;
};

/// Proposes `batch` points in the unit cube of the subspace. gp_bo fits a
/// GP on the projected history (warm-started from `warm_start`) and
/// maximizes EI over random candidates; random_search draws uniformly.
Proposal propose(OptimizerKind kind, const SubspaceHistory& history, int batch, Rng& rng,
                 const ProposeOptions& options = {},
                 std::optional<gp::KernelParams> warm_start = std::nullopt);

}  // namespace mctsvs
