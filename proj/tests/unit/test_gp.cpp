#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "mctsvs/errors.hpp"
#include "mctsvs/gp.hpp"
#include "mctsvs/random.hpp"

namespace {

using namespace mctsvs;
using gp::GPModel;
using gp::KernelParams;

double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelParams& p) {
  return p.signal_variance *
         std::exp(-(a - b).squaredNorm() / (2.0 * p.length_scale * p.length_scale));
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& x, const KernelParams& p) {
  Eigen::MatrixXd k(x.cols(), x.cols());
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) k(i, j) = kernel(x.col(i), x.col(j), p);
  }
  return k;
}

// Posterior through an explicit dense inverse, no Cholesky.
void oracle_posterior(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const KernelParams& p,
                      const Eigen::VectorXd& q, double& mean, double& var) {
  Eigen::MatrixXd k = gram(x, p);
  k.diagonal().array() += p.noise_variance;
  const Eigen::MatrixXd inv = k.inverse();
  Eigen::VectorXd ks(x.cols());
  for (Eigen::Index i = 0; i < x.cols(); ++i) ks[i] = kernel(x.col(i), q, p);
  mean = ks.dot(inv * y);
  var = p.signal_variance - ks.dot(inv * ks);
}

double oracle_lml(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const KernelParams& p) {
  Eigen::MatrixXd k = gram(x, p);
  k.diagonal().array() += p.noise_variance;
  const double n = static_cast<double>(y.size());
  return -0.5 * y.dot(k.inverse() * y) - 0.5 * std::log(k.determinant()) -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

struct Instance {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

Instance random_instance(int d, int n, Rng& rng) {
  Instance in{Eigen::MatrixXd(d, n), Eigen::VectorXd(n)};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < d; ++i) in.x(i, j) = uniform01(rng);
    in.y[j] = std::sin(3.0 * in.x.col(j).sum()) + 0.3 * standard_normal(rng);
  }
  return in;
}

KernelParams random_params(Rng& rng) {
  return {uniform(rng, 0.3, 3.0), uniform(rng, 0.2, 1.5), uniform(rng, 1e-4, 0.1)};
}

TEST(GpPosterior, MatchesDenseInverseOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 5));
    const int d = 1 + static_cast<int>(uniform_index(rng, 4));
    const auto in = random_instance(d, n, rng);
    const auto p = random_params(rng);
    const auto model = GPModel::condition(in.x, in.y, p, false);
    for (int q = 0; q < 5; ++q) {
      Eigen::VectorXd at(d);
      for (int i = 0; i < d; ++i) at[i] = uniform01(rng);
      double mean = 0.0;
      double var = 0.0;
      oracle_posterior(in.x, in.y, p, at, mean, var);
      const auto post = model.posterior(at);
      EXPECT_NEAR(post.mean, mean, 1e-8);
      EXPECT_NEAR(post.variance, std::max(var, 0.0), 1e-8);
    }
  }
}

TEST(GpPosterior, StandardizedMatchesOracleOnScaledTargets) {
  Rng rng(2);
  const auto in = random_instance(3, 5, rng);
  const KernelParams p{1.3, 0.6, 1e-3};
  const double mu = in.y.mean();
  const double sd = std::sqrt((in.y.array() - mu).square().mean());
  const Eigen::VectorXd ys = (in.y.array() - mu) / sd;
  const auto model = GPModel::condition(in.x, in.y, p, true);
  const Eigen::Vector3d at(0.2, 0.7, 0.4);
  double mean = 0.0;
  double var = 0.0;
  oracle_posterior(in.x, ys, p, at, mean, var);
  const auto post = model.posterior(at);
  EXPECT_NEAR(post.mean, mean * sd + mu, 1e-8);
  EXPECT_NEAR(post.variance, var * sd * sd, 1e-8);
}

TEST(GpPosterior, BatchEqualsPointwise) {
  Rng rng(3);
  const auto in = random_instance(4, 30, rng);
  const auto model = GPModel::condition(in.x, in.y, {1.0, 0.5, 1e-3});
  Eigen::MatrixXd q(4, 10);
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (int i = 0; i < 4; ++i) q(i, j) = uniform01(rng);
  }
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
  model.posterior(q, mean, var);
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const auto p = model.posterior(Eigen::VectorXd(q.col(j)));
    EXPECT_NEAR(mean[j], p.mean, 1e-12);
    EXPECT_NEAR(var[j], p.variance, 1e-12);
  }
}

TEST(GpPosterior, PriorWithoutData) {
  const GPModel model(3, {2.5, 0.5, 1e-6});
  const auto p = model.posterior(Eigen::Vector3d(0.1, 0.2, 0.3));
  EXPECT_EQ(p.mean, 0.0);
  EXPECT_EQ(p.variance, 2.5);
}

TEST(GpPosterior, SinglePointClosedForm) {
  Eigen::MatrixXd x(2, 1);
  x << 0.3, 0.6;
  Eigen::VectorXd y(1);
  y << 1.7;
  const KernelParams p{0.8, 0.4, 0.05};
  const auto model = GPModel::condition(x, y, p, false);
  EXPECT_NEAR(model.posterior(Eigen::VectorXd(x.col(0))).mean, 0.8 / (0.8 + 0.05) * 1.7, 1e-14);
}

TEST(GpPosterior, DuplicateInputsFactorize) {
  Eigen::MatrixXd x(2, 3);
  x << 0.5, 0.5, 0.5, 0.2, 0.2, 0.2;
  const Eigen::Vector3d y(1.0, 1.0, 1.0);
  EXPECT_NO_THROW({
    const auto m = GPModel::condition(x, y, {1.0, 0.5, gp::kNoiseFloor}, false);
    EXPECT_TRUE(std::isfinite(m.posterior(Eigen::Vector2d(0.5, 0.2)).mean));
  });
}

TEST(GpPosterior, NearInterpolationAtNoiseFloor) {
  Rng rng(4);
  const auto in = random_instance(2, 6, rng);
  const auto model = GPModel::condition(in.x, in.y, {1.0, 0.3, gp::kNoiseFloor});
  for (Eigen::Index j = 0; j < in.x.cols(); ++j) {
    EXPECT_NEAR(model.posterior(Eigen::VectorXd(in.x.col(j))).mean, in.y[j], 1e-4);
  }
}

TEST(GpPosterior, VarianceNonIncreasingWithData) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto in = random_instance(3, 12, rng);
    const KernelParams p = random_params(rng);
    Eigen::MatrixXd q(3, 20);
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      for (int i = 0; i < 3; ++i) q(i, j) = uniform01(rng);
    }
    Eigen::VectorXd prev = Eigen::VectorXd::Constant(q.cols(), p.signal_variance);
    for (int n = 1; n <= 12; ++n) {
      Eigen::VectorXd mean;
      Eigen::VectorXd var;
      GPModel::condition(in.x.leftCols(n), in.y.head(n), p, false).posterior(q, mean, var);
      EXPECT_TRUE(((var - prev).array() <= 1e-9).all());
      EXPECT_TRUE((var.array() >= 0.0).all());
      prev = var;
    }
  }
}

TEST(GpPosterior, PermutationInvariant) {
  Rng rng(6);
  const auto in = random_instance(3, 15, rng);
  std::vector<int> order(15);
  for (int i = 0; i < 15; ++i) order[i] = i;
  shuffle(order, rng);
  Eigen::MatrixXd xp(3, 15);
  Eigen::VectorXd yp(15);
  for (int i = 0; i < 15; ++i) {
    xp.col(i) = in.x.col(order[i]);
    yp[i] = in.y[order[i]];
  }
  const KernelParams p{1.1, 0.45, 1e-3};
  const auto a = GPModel::condition(in.x, in.y, p);
  const auto b = GPModel::condition(xp, yp, p);
  for (int t = 0; t < 10; ++t) {
    const Eigen::Vector3d q(uniform01(rng), uniform01(rng), uniform01(rng));
    EXPECT_NEAR(a.posterior(q).mean, b.posterior(q).mean, 1e-10);
    EXPECT_NEAR(a.posterior(q).variance, b.posterior(q).variance, 1e-10);
  }
}

TEST(GpPosterior, RejectsBadInput) {
  Eigen::MatrixXd x(2, 2);
  x.setConstant(0.5);
  EXPECT_THROW(GPModel::condition(x, Eigen::VectorXd::Zero(3), {}), ArgumentError);
  EXPECT_THROW(GPModel::condition(x, Eigen::Vector2d(1.0, NAN), {}), DataError);
  const GPModel m(2, {});
  EXPECT_THROW((void)m.posterior(Eigen::Vector3d::Zero()), ArgumentError);
}

TEST(GpLml, MatchesDenseOracle) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 5));
    const auto in = random_instance(2, n, rng);
    const auto p = random_params(rng);
    const auto model = GPModel::condition(in.x, in.y, p, false);
    EXPECT_NEAR(model.log_marginal_likelihood(), oracle_lml(in.x, in.y, p), 1e-8);
    const auto r = gp::log_marginal_likelihood_with_gradient(in.x, in.y, p);
    ASSERT_TRUE(r.ok);
    EXPECT_NEAR(r.value, oracle_lml(in.x, in.y, p), 1e-8);
  }
}

TEST(GpLml, SinglePointZeroTarget) {
  Eigen::MatrixXd x(1, 1);
  x << 0.4;
  const KernelParams p{1.7, 0.3, 0.2};
  const auto model = GPModel::condition(x, Eigen::VectorXd::Zero(1), p, false);
  EXPECT_NEAR(model.log_marginal_likelihood(),
              -0.5 * std::log(1.7 + 0.2) - 0.5 * std::log(2.0 * std::numbers::pi), 1e-14);
}

TEST(GpLml, ScalingTargetsChangesOnlyQuadraticTerm) {
  Rng rng(8);
  const auto in = random_instance(3, 5, rng);
  const KernelParams p{1.0, 0.5, 0.01};
  Eigen::MatrixXd k = gram(in.x, p);
  k.diagonal().array() += p.noise_variance;
  const double quad = in.y.dot(k.inverse() * in.y);
  const double c = 2.5;
  const double a = GPModel::condition(in.x, in.y, p, false).log_marginal_likelihood();
  const double b = GPModel::condition(in.x, c * in.y, p, false).log_marginal_likelihood();
  EXPECT_NEAR(b - a, -0.5 * (c * c - 1.0) * quad, 1e-8);
}

TEST(GpLml, GradientMatchesCentralDifferences) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 9));
    const auto in = random_instance(3, n, rng);
    const auto p = random_params(rng);
    const auto r = gp::log_marginal_likelihood_with_gradient(in.x, in.y, p);
    ASSERT_TRUE(r.ok);
    const double h = 1e-5;
    for (int k = 0; k < 3; ++k) {
      auto shifted = [&](double sign) {
        KernelParams q = p;
        const double f = std::exp(sign * h);
        if (k == 0) q.length_scale *= f;
        if (k == 1) q.signal_variance *= f;
        if (k == 2) q.noise_variance *= f;
        return gp::log_marginal_likelihood_with_gradient(in.x, in.y, q).value;
      };
      const double fd = (shifted(1.0) - shifted(-1.0)) / (2.0 * h);
      const double scale = std::max(std::abs(fd), 1e-3);
      EXPECT_LE(std::abs(r.gradient[k] - fd) / scale, 1e-4) << "parameter " << k;
    }
  }
}

TEST(GpFit, ChosenLmlDominatesEveryStart) {
  Rng data_rng(10);
  const auto in = random_instance(4, 40, data_rng);
  Rng rng(11);
  gp::FitReport report;
  const auto model = GPModel::fit(in.x, in.y, rng, {}, KernelParams{}, &report);
  ASSERT_EQ(report.start_lml.size(), 4u);
  const double chosen = model.log_marginal_likelihood();
  for (double v : report.start_lml) EXPECT_GE(chosen, v - 1e-9);
  const auto& b = gp::FitOptions{}.bounds;
  EXPECT_GE(model.params().length_scale, b.length_scale_min);
  EXPECT_LE(model.params().length_scale, b.length_scale_max);
  EXPECT_GE(model.params().noise_variance, b.noise_variance_min);
  EXPECT_LE(model.params().noise_variance, b.noise_variance_max);
}

TEST(GpFit, ImprovesOnStartingPoint) {
  Rng data_rng(12);
  const auto in = random_instance(2, 30, data_rng);
  Rng rng(13);
  gp::FitOptions opt;
  opt.restarts = 0;
  const KernelParams start{1.0, 5.0, 0.5};
  const auto model = GPModel::fit(in.x, in.y, rng, opt, start);
  const double before = GPModel::condition(in.x, in.y, start).log_marginal_likelihood();
  EXPECT_GT(model.log_marginal_likelihood(), before);
}

TEST(GpFit, Deterministic) {
  Rng data_rng(14);
  const auto in = random_instance(3, 25, data_rng);
  Rng r1(15);
  Rng r2(15);
  const auto a = GPModel::fit(in.x, in.y, r1);
  const auto b = GPModel::fit(in.x, in.y, r2);
  EXPECT_EQ(a.params(), b.params());
}

TEST(GpFit, ConstantTargetsUseUnitScale) {
  Eigen::MatrixXd x(1, 4);
  x << 0.1, 0.4, 0.6, 0.9;
  Rng rng(16);
  const auto model = GPModel::fit(x, Eigen::VectorXd::Constant(4, 3.0), rng);
  EXPECT_EQ(model.target_scale(), 1.0);
  EXPECT_NEAR(model.posterior(Eigen::VectorXd::Constant(1, 0.5)).mean, 3.0, 1e-6);
}

TEST(GpFit, Errors) {
  Rng rng(17);
  EXPECT_THROW(GPModel::fit(Eigen::MatrixXd(2, 0), Eigen::VectorXd(0), rng), ArgumentError);
  Eigen::MatrixXd x(1, 2);
  x << 0.2, 0.4;
  EXPECT_THROW(GPModel::fit(x, Eigen::Vector2d(1.0, INFINITY), rng), DataError);
}

TEST(GpFit, CostGrowsSuperQuadratically) {
  auto fit_ms = [](int n) {
    Rng data_rng(18);
    const auto in = random_instance(6, n, data_rng);
    double best = 1e300;
    for (int rep = 0; rep < 5; ++rep) {
      Rng rng(19);
      const auto t0 = std::chrono::steady_clock::now();
      (void)GPModel::fit(in.x, in.y, rng);
      best = std::min(best, std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count());
    }
    return best;
  };
  const double t100 = fit_ms(100);
  const double t200 = fit_ms(200);
  EXPECT_GE(t200 / t100, 4.0) << "n=100: " << t100 << " ms, n=200: " << t200 << " ms";
}

}  // namespace
