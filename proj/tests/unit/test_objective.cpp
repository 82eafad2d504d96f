#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "mctsvs/errors.hpp"
#include "mctsvs/objective.hpp"
#include "mctsvs/random.hpp"
#include "mctsvs/vs_core.hpp"

namespace {

using namespace mctsvs;

// Second coding of Hartmann-6 with P given as integers times 1e-4.
double hartmann6_oracle(const std::vector<double>& x) {
  static const double alpha[4] = {1.0, 1.2, 3.0, 3.2};
  static const double a[4][6] = {{10, 3, 17, 3.5, 1.7, 8},
                                 {0.05, 10, 17, 0.1, 8, 14},
                                 {3, 3.5, 1.7, 10, 17, 8},
                                 {17, 8, 0.05, 10, 0.1, 14}};
  static const int p[4][6] = {{1312, 1696, 5569, 124, 8283, 5886},
                              {2329, 4135, 8307, 3736, 1004, 9991},
                              {2348, 1451, 3522, 2883, 3047, 6650},
                              {4047, 8828, 8732, 5743, 1091, 381}};
  double outer = 0.0;
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 6; ++j) s += a[i][j] * std::pow(x[j] - p[i][j] * 1e-4, 2);
    outer += alpha[i] * std::exp(-s);
  }
  return outer;
}

double levy_oracle(const std::vector<double>& x) {
  const double pi = std::numbers::pi;
  const std::size_t d = x.size();
  std::vector<double> w(d);
  for (std::size_t i = 0; i < d; ++i) w[i] = 1.0 + (x[i] - 1.0) / 4.0;
  double f = std::pow(std::sin(pi * w[0]), 2);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    f += std::pow(w[i] - 1, 2) * (1 + 10 * std::pow(std::sin(pi * w[i] + 1), 2));
  }
  f += std::pow(w[d - 1] - 1, 2) * (1 + std::pow(std::sin(2 * pi * w[d - 1]), 2));
  return -f;
}

Eigen::VectorXd vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

TEST(Hartmann6, GlobalOptimumValue) {
  const std::vector<double> xs = {0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573};
  EXPECT_NEAR(hartmann6(xs), 3.32237, 1e-4);
  EXPECT_NEAR(hartmann6_oracle(xs), 3.32237, 1e-4);
}

TEST(Hartmann6, MidpointMatchesIndependentCoding) {
  const std::vector<double> mid(6, 0.5);
  EXPECT_NEAR(hartmann6(mid), hartmann6_oracle(mid), 1e-12);
}

TEST(Hartmann6, RandomPointsMatchIndependentCoding) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x(6);
    for (double& v : x) v = uniform01(rng);
    EXPECT_NEAR(hartmann6(x), hartmann6_oracle(x), 1e-12);
  }
}

TEST(Hartmann6, Pure) {
  const std::vector<double> x = {0.1, 0.9, 0.3, 0.3, 0.7, 0.2};
  EXPECT_EQ(hartmann6(x), hartmann6(x));
}

TEST(Hartmann6, OutOfBoundsThrows) {
  EXPECT_THROW(hartmann6(std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 1.01}), DomainError);
  EXPECT_THROW(hartmann6(std::vector<double>{-0.01, 0.2, 0.3, 0.4, 0.5, 0.6}), DomainError);
}

TEST(Levy, OptimumIsZero) {
  EXPECT_NEAR(levy(std::vector<double>(10, 1.0)), 0.0, 1e-15);
}

TEST(Levy, OriginMatchesIndependentCoding) {
  const std::vector<double> zero(10, 0.0);
  EXPECT_NEAR(levy(zero), levy_oracle(zero), 1e-12);
}

TEST(Levy, NegativeAwayFromOptimum) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x(10);
    for (double& v : x) v = uniform(rng, -10.0, 10.0);
    EXPECT_LT(levy(x), 0.0);
    EXPECT_NEAR(levy(x), levy_oracle(x), 1e-10);
  }
}

TEST(Levy, OutOfBoundsThrows) {
  std::vector<double> x(10, 0.0);
  x[3] = 10.5;
  EXPECT_THROW(levy(x), DomainError);
}

TEST(ExtendWithDummies, Hartmann300Shape) {
  const auto spec = extend_with_dummies(make_hartmann6(), 300);
  EXPECT_EQ(spec.dimension(), 300);
  EXPECT_EQ(spec.valid_indices(), VariableIndexSet::range(0, 6));
  for (int i = 6; i < 300; ++i) {
    EXPECT_EQ(spec.lower()[i], 0.0);
    EXPECT_EQ(spec.upper()[i], 1.0);
  }
}

TEST(ExtendWithDummies, IdentityExtension) {
  const auto base = make_levy(10);
  const auto same = extend_with_dummies(base, 10);
  EXPECT_EQ(same.dimension(), 10);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(10, 0.3);
  EXPECT_EQ(same.evaluate(x), base.evaluate(x));
}

TEST(ExtendWithDummies, DummyCoordinateInvariance) {
  const auto spec = make_problem("hartmann6_300");
  Rng rng(2);
  Eigen::VectorXd x(300);
  for (int i = 0; i < 300; ++i) x[i] = uniform01(rng);
  Eigen::VectorXd x2 = x;
  x2[6] = 1.0 - x[6];
  EXPECT_EQ(spec.evaluate(x), spec.evaluate(x2));
  for (int i = 6; i < 300; ++i) x2[i] = uniform01(rng);
  EXPECT_EQ(spec.evaluate(x), spec.evaluate(x2));
}

TEST(ExtendWithDummies, SmallerTargetThrows) {
  EXPECT_THROW(extend_with_dummies(make_hartmann6(), 5), ArgumentError);
}

TEST(MixHartmann, FiveCopiesHaveThirtyValid) {
  const auto spec = mix_hartmann(5, std::vector<double>(5, 1.0), 500);
  EXPECT_EQ(spec.dimension(), 500);
  EXPECT_EQ(spec.valid_indices().size(), 30u);
  EXPECT_EQ(make_problem("hartmann6_10_500").valid_indices().size(), 60u);
}

TEST(MixHartmann, WeightedSumOfBlocks) {
  const std::vector<double> w = {1, 0.5, 0.25, 0.125, 0.0625};
  const auto spec = make_problem("hartmann6_5_500_v");
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd x(500);
    for (int i = 0; i < 500; ++i) x[i] = uniform01(rng);
    double expected = 0.0;
    for (int j = 0; j < 5; ++j) {
      expected += w[j] * hartmann6_oracle(std::vector<double>(x.data() + 6 * j, x.data() + 6 * j + 6));
    }
    EXPECT_NEAR(spec.evaluate(x), expected, 1e-12);
  }
}

TEST(MixHartmann, SingleCopyEqualsHartmann) {
  const auto spec = mix_hartmann(1, {1.0}, 6);
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(6);
    for (double& v : x) v = uniform01(rng);
    EXPECT_EQ(spec.evaluate(vec(x)), hartmann6(x));
  }
}

TEST(MixHartmann, DimensionMismatchThrows) {
  EXPECT_THROW(mix_hartmann(5, {1, 1, 1}, 500), ArgumentError);
  EXPECT_THROW(mix_hartmann(5, std::vector<double>(5, 1.0), 20), ArgumentError);
}

TEST(Recall, HalfOfValid) {
  const auto spec = make_problem("hartmann6_300");
  EXPECT_DOUBLE_EQ(recall(VariableIndexSet{0, 1, 2, 6, 7}, spec), 0.5);
  EXPECT_DOUBLE_EQ(recall(spec.valid_indices(), spec), 1.0);
  EXPECT_DOUBLE_EQ(recall(VariableIndexSet{100, 200}, spec), 0.0);
}

TEST(Recall, RandomSixSubsetAveragesTwoPercent) {
  const auto spec = make_problem("hartmann6_300");
  Rng rng(4);
  double total = 0.0;
  const int draws = 20000;
  for (int t = 0; t < draws; ++t) total += recall(random_subset_of_size(300, 6, rng), spec);
  EXPECT_NEAR(total / draws, 0.020, 0.005);
}

TEST(Registry, AllNamesBuild) {
  for (const auto& name : registered_problems()) {
    const auto spec = make_problem(name);
    EXPECT_EQ(spec.name(), name);
    EXPECT_GE(spec.dimension(), static_cast<int>(spec.valid_indices().size()));
    const Eigen::VectorXd mid = (spec.lower() + spec.upper()) / 2.0;
    EXPECT_TRUE(std::isfinite(spec.evaluate(mid)));
  }
  EXPECT_EQ(make_problem("levy10_100").valid_indices().size(), 10u);
  EXPECT_THROW(make_problem("rosenbrock_10"), ConfigError);
  EXPECT_THROW(make_problem("hartmann6_3"), ConfigError);
}

TEST(Registry, DefaultCp) {
  EXPECT_EQ(default_cp("levy10_300"), 10.0);
  EXPECT_EQ(default_cp("hartmann6_500"), 0.1);
}

TEST(ObjectiveSpec, EvaluateChecksBoxAndSize) {
  const auto spec = make_levy(4);
  EXPECT_THROW((void)spec.evaluate(Eigen::VectorXd::Zero(3)), DomainError);
  EXPECT_THROW((void)spec.evaluate(Eigen::VectorXd::Constant(4, 11.0)), DomainError);
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(4, 0.55);
  EXPECT_TRUE(spec.to_unit(spec.from_unit(u)).isApprox(u, 1e-15));
}

}  // namespace
