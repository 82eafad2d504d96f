#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mctsvs/errors.hpp"
#include "mctsvs/regret_lab.hpp"

namespace {

using namespace mctsvs;
using namespace mctsvs::regret;

GridWorld small_world(int dimension = 2, int resolution = 5) {
  GridWorld w;
  w.dimension = dimension;
  w.resolution = resolution;
  return w;
}

TEST(Beta, ReferenceValue) {
  const BoundParams p;
  EXPECT_NEAR(beta_t(1, 1, p, 1, 1.0), 9.6785, 1e-4);
  // Second coding of the same expression.
  const double pi_1 = std::numbers::pi * std::numbers::pi / 6.0;
  const double expected =
      2.0 * std::log(4.0 * pi_1 / 0.1) + 2.0 * std::log(std::sqrt(std::log(4.0 / 0.1)));
  EXPECT_NEAR(beta_t(1, 1, p, 1, 1.0), expected, 1e-12);
}

TEST(Beta, MonotoneInIterationAndSelectedCount) {
  const BoundParams p;
  for (int d = 1; d <= 4; ++d) {
    for (int t = 1; t < 200; ++t) EXPECT_GE(beta_t(t + 1, d, p, 4, 1.0), beta_t(t, d, p, 4, 1.0));
  }
  for (int t = 1; t <= 50; ++t) {
    for (int d = 1; d < 4; ++d) EXPECT_GT(beta_t(t, d + 1, p, 4, 1.0), beta_t(t, d, p, 4, 1.0));
  }
}

TEST(Beta, ScheduleSumsToOne) {
  double partial = 0.0;
  for (int t = 1; t <= 100000; ++t) partial += 1.0 / BoundParams::pi_t(t);
  EXPECT_NEAR(partial, 1.0, 1e-5);
  EXPECT_LT(partial, 1.0);
}

TEST(BoundParamsTest, Constants) {
  BoundParams p;
  p.noise_variance = 0.25;
  EXPECT_NEAR(p.c1(), 8.0 / std::log(5.0), 1e-14);
  EXPECT_NEAR(p.lipschitz_scale(3), std::sqrt(std::log(120.0)), 1e-14);
}

TEST(Grid, IndexRoundTripAndValidation) {
  GridWorld w = small_world(3, 4);
  EXPECT_EQ(w.point_count(), 64u);
  for (std::size_t f = 0; f < w.point_count(); ++f) {
    EXPECT_EQ(w.flat_index(w.grid_coords(f)), f);
  }
  EXPECT_EQ(w.grid_coords(1), (std::vector<int>{1, 0, 0}));
  EXPECT_NEAR(w.point(1)[0], 1.0 / 3.0, 1e-15);
  w.resolution = 1;
  EXPECT_THROW(w.validate(), ArgumentError);
  w = small_world(5, 2);
  EXPECT_THROW(w.validate(), ArgumentError);
  w = small_world(4, 20);
  EXPECT_THROW(w.validate(), ResourceError);
  Rng rng(61);
  EXPECT_THROW(sample_gp_function(w, rng), ResourceError);
}

TEST(Sample, Deterministic) {
  const auto w = small_world(2, 6);
  Rng a(62);
  Rng b(62);
  EXPECT_EQ(sample_gp_function(w, a).values, sample_gp_function(w, b).values);
}

TEST(Sample, PriorMomentsMonteCarlo) {
  const auto w = small_world(2, 5);
  Rng rng(63);
  const int draws = 500;
  const std::size_t p0 = w.flat_index({2, 2});
  const std::size_t p1 = w.flat_index({3, 2});
  double s0 = 0, s1 = 0, s00 = 0, s11 = 0, s01 = 0;
  for (int i = 0; i < draws; ++i) {
    const auto f = sample_gp_function(w, rng);
    const double a = f.values[p0];
    const double b = f.values[p1];
    s0 += a;
    s1 += b;
    s00 += a * a;
    s11 += b * b;
    s01 += a * b;
    EXPECT_EQ(f.max_value, f.values[f.argmax]);
  }
  const double m0 = s0 / draws;
  const double m1 = s1 / draws;
  const double v0 = s00 / draws - m0 * m0;
  const double v1 = s11 / draws - m1 * m1;
  const double corr = (s01 / draws - m0 * m1) / std::sqrt(v0 * v1);
  EXPECT_NEAR(v0, w.kernel.signal_variance, 0.15 * w.kernel.signal_variance);
  const double step = w.step();
  const double ell = w.kernel.length_scale;
  EXPECT_NEAR(corr, std::exp(-step * step / (2.0 * ell * ell)), 0.1);
}

TEST(Alpha, LinearFunction) {
  const auto w = small_world(3, 6);
  const auto f = tabulate(w, [](const Eigen::VectorXd& x) { return 3.0 * x[0]; });
  const auto a = estimate_alpha_star(f, w);
  EXPECT_NEAR(a.alpha_l[0], 3.0, 1e-12);
  EXPECT_NEAR(a.alpha_l[1], 0.0, 1e-12);
  EXPECT_NEAR(a.alpha_l[2], 0.0, 1e-12);
  EXPECT_NEAR(a.alpha_max_l, 3.0, 1e-12);
}

TEST(Alpha, ConstantAndSymmetric) {
  const auto w = small_world(2, 7);
  const auto c = estimate_alpha_star(tabulate(w, [](const Eigen::VectorXd&) { return 1.5; }), w);
  EXPECT_TRUE((c.alpha_l.array() == 0.0).all());
  const auto g = [](double t) { return std::sin(5.0 * t) + t * t; };
  const auto s = estimate_alpha_star(
      tabulate(w, [&](const Eigen::VectorXd& x) { return g(x[0]) + g(x[1]); }), w);
  EXPECT_NEAR(s.alpha_l[0], s.alpha_l[1], 1e-12);
}

TEST(GpUcbVs, ConstantFunctionHasNoRegret) {
  const auto w = small_world(2, 5);
  const auto f = tabulate(w, [](const Eigen::VectorXd&) { return 0.7; });
  Rng rng(64);
  for (const auto& policy : {full_selection(2), fixed_selection(VariableIndexSet{1}),
                             random_selection(2, 1)}) {
    const auto trace = gp_ucb_vs_run(w, f, policy, 10, BoundParams{}, rng);
    EXPECT_EQ(trace.cumulative_regret(), 0.0);
  }
}

TEST(GpUcbVs, TraceInvariants) {
  const auto w = small_world(3, 5);
  Rng rng(65);
  const auto f = sample_gp_function(w, rng);
  const BoundParams params;
  const auto trace = gp_ucb_vs_run(w, f, random_selection(3, 2), 15, params, rng);
  ASSERT_EQ(trace.steps.size(), 15u);
  double cum = 0.0;
  double gain = 0.0;
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const auto& s = trace.steps[t];
    EXPECT_GE(s.regret, 0.0);
    EXPECT_NEAR(s.regret, f.max_value - f.values[s.point], 1e-15);
    EXPECT_EQ(s.selected.size(), 2u);
    EXPECT_NEAR(s.beta, beta_t(static_cast<int>(t) + 1, 2, params, 3, w.upper), 1e-12);
    cum += s.regret;
    EXPECT_NEAR(s.cumulative, cum, 1e-12);
    gain += std::log(1.0 + s.sigma * s.sigma / params.noise_variance);
  }
  EXPECT_NEAR(trace.info_gain_surrogate, gain, 1e-10);
  // Nothing is observed before the first pick.
  EXPECT_NEAR(trace.steps[0].sigma, std::sqrt(w.kernel.signal_variance), 1e-12);
}

TEST(GpUcbVs, PessimisticCompletion) {
  const auto w = small_world(2, 5);
  // f increases in x0 and decreases in x1; with only x0 selected the
  // completion must put x1 at its worst value.
  const auto f = tabulate(w, [](const Eigen::VectorXd& x) { return x[0] + 0.5 * x[1] * x[1]; });
  Rng rng(66);
  const auto trace = gp_ucb_vs_run(w, f, fixed_selection(VariableIndexSet{0}), 8, BoundParams{}, rng);
  for (const auto& s : trace.steps) EXPECT_EQ(w.grid_coords(s.point)[1], 0);
}

TEST(BoundCheck, SingleStepArithmetic) {
  const auto w = small_world(2, 5);
  Rng rng(67);
  const auto f = sample_gp_function(w, rng);
  const auto alpha = estimate_alpha_star(f, w);
  const BoundParams params;
  const auto trace = gp_ucb_vs_run(w, f, full_selection(2), 1, params, rng);
  const auto r = bound_check(trace, params, alpha.alpha_l, alpha.alpha_max_l, w.upper);
  const auto& s = trace.steps[0];
  const double alpha_max = alpha.alpha_max_l / params.lipschitz_scale(2);
  const double rhs = 2.0 * std::sqrt(s.beta) * s.sigma + 2.0 * alpha_max;
  EXPECT_NEAR(r.bound, rhs, 1e-12);
  EXPECT_EQ(r.selection_term, 0.0);
  EXPECT_EQ(r.bound, r.bound_without_selection);
  EXPECT_EQ(r.holds, s.regret <= rhs);
}

TEST(BoundCheck, SelectionTermMonotoneInDroppedSet) {
  RegretTrace trace;
  const Eigen::Vector4d alpha(0.5, 2.0, 1.0, 3.0);
  auto with_selected = [&](VariableIndexSet m) {
    RegretTrace t;
    for (int i = 0; i < 5; ++i) t.steps.push_back({m, 0, 0.0, 0.0, 0.0, 0.0});
    return selection_term(t, alpha, 2.0);
  };
  EXPECT_EQ(with_selected(VariableIndexSet::all(4)), 0.0);
  const double one = with_selected(VariableIndexSet{0, 1, 2});
  const double two = with_selected(VariableIndexSet{0, 2});
  const double three = with_selected(VariableIndexSet{2});
  EXPECT_NEAR(one, 2.0 * 5 * 3.0 * 2.0, 1e-12);
  EXPECT_LE(one, two);
  EXPECT_LE(two, three);
  EXPECT_THROW(bound_check(trace, BoundParams{}, alpha, 3.0, 1.0), ArgumentError);
}

TEST(Policy, Parsing) {
  Rng rng(68);
  EXPECT_EQ(parse_policy("full", 3)(1, rng), VariableIndexSet::all(3));
  EXPECT_EQ(parse_policy("fixed:0,2", 3)(5, rng), (VariableIndexSet{0, 2}));
  EXPECT_EQ(parse_policy("drop:1", 3)(2, rng), (VariableIndexSet{0, 2}));
  EXPECT_EQ(parse_policy("random:2", 3)(1, rng).size(), 2u);
  EXPECT_THROW(parse_policy("drop:0,1,2", 3), ConfigError);
  EXPECT_THROW(parse_policy("fixed:3", 3), ConfigError);
  EXPECT_THROW(parse_policy("random:4", 3), ConfigError);
  EXPECT_THROW(parse_policy("greedy", 3), ConfigError);
}

TEST(Lab, SmallBatchDeterministicWithJson) {
  LabConfig c;
  c.world = small_world(2, 5);
  c.horizon = 5;
  c.runs = 3;
  c.seed = 9;
  const auto a = run_regret_lab(c);
  const auto b = run_regret_lab(c);
  ASSERT_EQ(a.runs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.runs[i].seed, 9u + i);
    EXPECT_EQ(a.runs[i].report.cumulative_regret, b.runs[i].report.cumulative_regret);
  }
  const auto j = nlohmann::json::parse(to_json(a));
  EXPECT_EQ(j["runs"].size(), 3u);
  EXPECT_EQ(to_json(a), to_json(b));
}

TEST(Lab, ThreadCountDoesNotChangeResults) {
  LabConfig c;
  c.world = small_world(2, 4);
  c.horizon = 4;
  c.runs = 6;
  const auto serial = run_regret_lab(c);
  c.threads = 3;
  const auto parallel = run_regret_lab(c);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(serial.runs[i].report.bound, parallel.runs[i].report.bound);
  }
}

}  // namespace
