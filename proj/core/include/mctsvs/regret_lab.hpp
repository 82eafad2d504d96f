#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mctsvs/gp.hpp"
#include "mctsvs/index_set.hpp"
#include "mctsvs/random.hpp"

namespace mctsvs::regret {

/// Regular grid on [0, upper]^dimension with `resolution` points per axis
/// (spacing upper / (resolution - 1)). Flat indices run with coordinate 0
/// fastest.
struct GridWorld {
  static constexpr std::size_t kMaxPoints = 100000;
  /// Dense covariance memory allowed when sampling a GP path.
  static constexpr std::size_t kMaxCovarianceBytes = std::size_t{2} << 30;

  int dimension = 3;
  int resolution = 8;
  double upper = 1.0;
  gp::KernelParams kernel{1.0, 0.25, 0.01};

  /// Throws ArgumentError for bad shapes and ResourceError past the caps.
  void validate() const;
  [[nodiscard]] std::size_t point_count() const;
  [[nodiscard]] double step() const { return upper / (resolution - 1); }
  [[nodiscard]] Eigen::VectorXd point(std::size_t flat) const;
  [[nodiscard]] std::vector<int> grid_coords(std::size_t flat) const;
  [[nodiscard]] std::size_t flat_index(const std::vector<int>& coords) const;
};

struct SampledFunction {
  std::vector<double> values;  // one per grid point
  double max_value = 0.0;
  std::size_t argmax = 0;
};

/// Exact joint draw of the zero-mean GP prior on the grid.
SampledFunction sample_gp_function(const GridWorld& world, Rng& rng);

/// Tabulates an explicit function on the grid.
SampledFunction tabulate(const GridWorld& world,
                         const std::function<double(const Eigen::VectorXd&)>& f);

struct LipschitzEstimate {
  Eigen::VectorXd alpha_l;  // realized alpha*_i * L per dimension
  double alpha_max_l = 0.0;
};

/// Largest absolute forward difference along each axis, divided by the
/// grid step.
LipschitzEstimate estimate_alpha_star(const SampledFunction& f, const GridWorld& world);

/// Constants of the regret bound. pi_t = pi^2 t^2 / 6.
struct BoundParams {
  double delta = 0.1;
  double a = 1.0;
  double b = 1.0;
  double noise_variance = 0.01;  // eta^2

  [[nodiscard]] static double pi_t(int t);
  /// L = b sqrt(log(4 D a / delta))
  [[nodiscard]] double lipschitz_scale(int dimension) const;
  /// C1 = 8 / log(1 + eta^-2)
  [[nodiscard]] double c1() const;
};

/// beta_t = 2 log(4 pi_t / delta) + 2 d_t log(d_t t^2 b r sqrt(log(4 D a / delta)))
double beta_t(int t, int selected_count, const BoundParams& params, int dimension, double upper);

/// Source of the variable subset used at each iteration (t is 1-based).
using SelectionPolicy = std::function<VariableIndexSet(int t, Rng& rng)>;

SelectionPolicy full_selection(int dimension);
SelectionPolicy fixed_selection(VariableIndexSet indices);
SelectionPolicy drop_selection(int dimension, const VariableIndexSet& dropped);
SelectionPolicy random_selection(int dimension, int subset_size);

struct RegretStep {
  VariableIndexSet selected;
  std::size_t point = 0;  // flat grid index of the evaluated full point
  double regret = 0.0;    // f(x*) - f(x_t)
  double sigma = 0.0;     // posterior std at x_t before observing y_t
  double beta = 0.0;
  double cumulative = 0.0;
};

struct RegretTrace {
  std::vector<RegretStep> steps;
  /// sum_t log(1 + sigma_{t-1}^2(x_t) / eta^2)
  double info_gain_surrogate = 0.0;

  [[nodiscard]] double cumulative_regret() const {
    return steps.empty() ? 0.0 : steps.back().cumulative;
  }
};

/// GP-UCB with variable selection on the grid. At each step the model is
/// conditioned on the history projected onto the selected coordinates,
/// the sub-grid point maximizing mu + sqrt(beta_t) sigma is chosen, and
/// the remaining coordinates are completed with the grid minimizer of f.
/// Observations carry N(0, eta^2) noise; regret uses the exact f.
RegretTrace gp_ucb_vs_run(const GridWorld& world, const SampledFunction& f,
                          const SelectionPolicy& policy, int horizon, const BoundParams& params,
                          Rng& rng);

/// 2 sum_t sum_{i not in M_t} alpha*_i L r
double selection_term(const RegretTrace& trace, const Eigen::VectorXd& alpha_l, double upper);

struct BoundReport {
  int horizon = 0;
  double cumulative_regret = 0.0;
  double ucb_term = 0.0;             // sum_t 2 sqrt(beta_t) sigma_{t-1}(x_t)
  double discretization_term = 0.0;  // 2 alpha_max
  double selection_term = 0.0;
  double bound = 0.0;
  bool holds = false;
  /// The same inequality with the selection term removed.
  double bound_without_selection = 0.0;
  bool holds_without_selection = false;
  // Closed form with the realized information-gain surrogate (reported only).
  double beta_star = 0.0;
  double info_gain_surrogate = 0.0;
  double closed_form_bound = 0.0;
  bool closed_form_holds = false;
  double lipschitz_scale = 0.0;
  double alpha_max = 0.0;
};

/// Evaluates the summed per-iteration inequality
///   R_T <= sum_t 2 sqrt(beta_t) sigma_{t-1}(x_t) + 2 alpha_max + 2 sum_t sum_{i not in M_t} alpha*_i L r
/// and, for information, sqrt(C1 T beta*_T G / 2) + 2 alpha_max + selection term
/// with G the realized information-gain surrogate.
BoundReport bound_check(const RegretTrace& trace, const BoundParams& params,
                        const Eigen::VectorXd& alpha_l, double alpha_max_l, double upper);

/// Settings of a batch of independent lab runs.
struct LabConfig {
  GridWorld world;
  BoundParams params;
  int horizon = 30;
  int runs = 100;
  std::uint64_t seed = 0;
  /// "full", "fixed:i,j", "drop:i,j" or "random:d" (0-based indices).
  std::string policy = "full";
  /// "gp" for GP sample paths, or "linear:c0,c1,..." for f(x) = sum c_i x_i.
  std::string function = "gp";
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 1;
};

struct LabRun {
  std::uint64_t seed = 0;
  BoundReport report;
  Eigen::VectorXd alpha_l;
};

struct LabReport {
  LabConfig config;
  std::vector<LabRun> runs;
  [[nodiscard]] int holds_count() const;
  [[nodiscard]] int holds_without_selection_count() const;
};

SelectionPolicy parse_policy(const std::string& text, int dimension);

/// Runs `config.runs` independent draws; run r uses seed config.seed + r.
LabReport run_regret_lab(const LabConfig& config);

/// JSON document with per-run check outcomes, the pass fraction and the
/// bound components.
std::string to_json(const LabReport& report);

}  // namespace mctsvs::regret
