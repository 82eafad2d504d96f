#include "mctsvs/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mctsvs/errors.hpp"

namespace mctsvs::acquisition {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

}  // namespace

double expected_improvement(double mean, double variance, double best) {
  const double sigma = std::sqrt(std::max(variance, 0.0));
  const double gap = mean - best;
  if (sigma <= 0.0) return std::max(gap, 0.0);
  const double z = gap / sigma;
  return std::max(sigma * (z * normal_cdf(z) + normal_pdf(z)), 0.0);
}

double gp_ucb_value(double mean, double variance, double beta) {
  return mean + std::sqrt(std::max(beta, 0.0) * std::max(variance, 0.0));
}

int default_candidate_count(int dimension) { return std::min(5000, 1000 * dimension); }

BatchProposal propose_batch(const gp::GPModel& model, int dimension, int batch, int candidates,
                            double best, const AcquisitionKind& kind, Rng& rng) {
  if (batch < 1 || candidates < batch) {
    throw ArgumentError("propose_batch requires candidates >= batch >= 1");
  }
  if (dimension != model.dimension()) {
    throw ArgumentError("propose_batch dimension does not match the model");
  }
  Eigen::MatrixXd pool(dimension, candidates);
  for (int c = 0; c < candidates; ++c) {
    for (int i = 0; i < dimension; ++i) pool(i, c) = uniform01(rng);
  }
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
  model.posterior(pool, mean, var);

  BatchProposal out;
  out.candidate_scores.resize(static_cast<std::size_t>(candidates));
  for (int c = 0; c < candidates; ++c) {
    out.candidate_scores[static_cast<std::size_t>(c)] = std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, ExpectedImprovement>) {
            return expected_improvement(mean[c], var[c], best);
          } else {
            return gp_ucb_value(mean[c], var[c], k.beta);
          }
        },
        kind);
  }

  std::vector<int> order(static_cast<std::size_t>(candidates));
  std::iota(order.begin(), order.end(), 0);
  const auto& sc = out.candidate_scores;
  std::partial_sort(order.begin(), order.begin() + batch, order.end(), [&](int a, int b) {
    const double sa = sc[static_cast<std::size_t>(a)];
    const double sb = sc[static_cast<std::size_t>(b)];
    return sa > sb || (sa == sb && a < b);
  });
  order.resize(static_cast<std::size_t>(batch));

  out.points.resize(dimension, batch);
  for (int j = 0; j < batch; ++j) {
    const int c = order[static_cast<std::size_t>(j)];
    out.points.col(j) = pool.col(c);
    out.scores.push_back(sc[static_cast<std::size_t>(c)]);
  }
  out.chosen_indices = std::move(order);
  return out;
}

}  // namespace mctsvs::acquisition
