#pragma once

#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "mctsvs/random.hpp"

namespace mctsvs::gp {

/// Isotropic squared-exponential kernel hyperparameters.
///   k(x, x') = signal_variance * exp(-|x - x'|^2 / (2 length_scale^2))
/// plus noise_variance on the diagonal of the training covariance.
struct KernelParams {
  double signal_variance = 1.0;
  double length_scale = 0.5;
  double noise_variance = 1e-6;

  friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

/// Box on the hyperparameters, searched in log space.
struct HyperBounds {
  double length_scale_min = 1e-2;
  double length_scale_max = 1e2;
  double signal_variance_min = 1e-2;
  double signal_variance_max = 1e2;
  double noise_variance_min = 1e-6;
  double noise_variance_max = 1.0;
};

inline constexpr double kNoiseFloor = 1e-6;

struct FitOptions {
  HyperBounds bounds;
  /// Random initializations in addition to the warm start.
  int restarts = 3;
  /// BFGS iterations per start.
  int max_iterations = 50;
  /// Stop a start once the gradient infinity norm (w.r.t. the unconstrained
  /// coordinates) falls below this.
  double gradient_tolerance = 1e-5;
  /// Stop a start once one iteration improves the LML by less than this.
  double value_tolerance = 1e-9;
  bool standardize = true;
};

/// Per-start outcome of a multi-start fit.
struct FitReport {
  std::vector<KernelParams> start_params;
  std::vector<double> start_lml;
  std::size_t chosen = 0;
  int lml_evaluations = 0;
};

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;
};

/// Log marginal likelihood and its gradient w.r.t. (log length_scale,
/// log signal_variance, log noise_variance), evaluated on raw targets.
struct LmlResult {
  double value = 0.0;
  Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
  bool ok = false;  // false if the covariance was not positive definite
};

LmlResult log_marginal_likelihood_with_gradient(const Eigen::MatrixXd& x,
                                                const Eigen::VectorXd& y,
                                                const KernelParams& params);

/// Exact GP posterior with a squared-exponential kernel.
///
/// Training inputs are expected in the unit cube. When standardization is
/// on, targets are shifted to zero mean and scaled to unit variance before
/// conditioning (a constant target vector keeps unit scale); posterior
/// moments are reported back on the original scale. KernelParams always
/// refer to the standardized scale.
class GPModel {
 public:
  /// Prior-only model in `dimension` inputs.
  GPModel(int dimension, KernelParams params);

  /// Conditions on (x, y) at fixed hyperparameters. Throws ArgumentError on
  /// shape mismatch, DataError on non-finite targets.
  static GPModel condition(Eigen::MatrixXd x, const Eigen::VectorXd& y, KernelParams params,
                           bool standardize = true);

  /// Fits hyperparameters by multi-start BFGS on the log marginal
  /// likelihood, starting from `warm_start` (if any) and `options.restarts`
  /// log-uniform random draws. Throws ArgumentError when there are no
  /// points and DataError on non-finite targets.
  static GPModel fit(Eigen::MatrixXd x, const Eigen::VectorXd& y, Rng& rng,
                     const FitOptions& options = {},
                     std::optional<KernelParams> warm_start = std::nullopt,
                     FitReport* report = nullptr);

  [[nodiscard]] Posterior posterior(const Eigen::VectorXd& x) const;

  /// Column-wise posterior for a d x m matrix of query points.
  void posterior(const Eigen::MatrixXd& queries, Eigen::VectorXd& mean,
                 Eigen::VectorXd& variance) const;

  /// Log marginal likelihood of the (standardized) training targets.
  [[nodiscard]] double log_marginal_likelihood() const;

  [[nodiscard]] const KernelParams& params() const { return params_; }
  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] Eigen::Index size() const { return train_x_.cols(); }
  [[nodiscard]] double target_offset() const { return y_offset_; }
  [[nodiscard]] double target_scale() const { return y_scale_; }

 private:
  GPModel() = default;
  void factorize();

  int dimension_ = 0;
  KernelParams params_;
  Eigen::MatrixXd train_x_;  // d x n, one column per point
  Eigen::VectorXd train_y_;  // standardized
  double y_offset_ = 0.0;
  double y_scale_ = 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;  // (K + noise I)^{-1} y
};

/// Pairwise squared distances between the columns of a (d x n) and b (d x m).
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace mctsvs::gp
