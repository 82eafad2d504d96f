#pragma once

#include <variant>
#include <vector>

#include <Eigen/Core>

#include "mctsvs/gp.hpp"
#include "mctsvs/random.hpp"

namespace mctsvs::acquisition {

struct ExpectedImprovement {};

struct GpUcb {
  double beta = 0.0;
};

using AcquisitionKind = std::variant<ExpectedImprovement, GpUcb>;

/// Closed-form EI for maximization: sigma * (z Phi(z) + phi(z)),
/// z = (mean - best) / sigma. With zero variance this is max(mean - best, 0).
double expected_improvement(double mean, double variance, double best);

/// mean + sqrt(beta * variance).
double gp_ucb_value(double mean, double variance, double beta);

/// min(5000, 1000 * dimension)
int default_candidate_count(int dimension);

struct BatchProposal {
  /// dimension x batch; columns in descending score order.
  Eigen::MatrixXd points;
  std::vector<double> scores;
  /// Scores and positions of every candidate, in draw order.
  std::vector<double> candidate_scores;
  std::vector<int> chosen_indices;
};

/// Draws `candidates` uniform points in [0,1]^dimension, scores them with
/// the acquisition, and keeps the top `batch` (ties broken by draw order).
/// Throws ArgumentError unless candidates >= batch >= 1.
BatchProposal propose_batch(const gp::GPModel& model, int dimension, int batch, int candidates,
                            double best, const AcquisitionKind& kind, Rng& rng);

}  // namespace mctsvs::acquisition
