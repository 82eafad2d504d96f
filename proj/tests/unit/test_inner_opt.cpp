#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "mctsvs/acquisition.hpp"
#include "mctsvs/errors.hpp"
#include "mctsvs/gp.hpp"
#include "mctsvs/inner_opt.hpp"

namespace {

using namespace mctsvs;

SubspaceHistory two_point_history() {
  SubspaceHistory h;
  h.indices = VariableIndexSet{0};
  h.points.resize(1, 2);
  h.points << 0.2, 0.8;
  h.values.resize(2);
  h.values << 0.0, 1.0;
  return h;
}

bool in_unit_cube(const Eigen::MatrixXd& p) {
  return (p.array() >= 0.0).all() && (p.array() <= 1.0).all();
}

TEST(OptimizerKind, Names) {
  EXPECT_EQ(optimizer_from_string("gp_bo"), OptimizerKind::gp_bo);
  EXPECT_EQ(optimizer_from_string("random_search"), OptimizerKind::random_search);
  EXPECT_STREQ(to_string(OptimizerKind::random_search), "random_search");
  EXPECT_THROW(optimizer_from_string("cmaes"), ConfigError);
}

TEST(Propose, RandomSearchReproducible) {
  const auto h = two_point_history();
  Rng a(31);
  Rng b(31);
  const auto pa = propose(OptimizerKind::random_search, h, 3, a);
  const auto pb = propose(OptimizerKind::random_search, h, 3, b);
  ASSERT_EQ(pa.points.cols(), 3);
  EXPECT_EQ(pa.points, pb.points);
  EXPECT_TRUE(in_unit_cube(pa.points));
  EXPECT_FALSE(pa.fitted.has_value());
}

TEST(Propose, GpBoEmptyHistoryReturnsFirstDraws) {
  SubspaceHistory h;
  h.indices = VariableIndexSet{1, 4};
  h.points.resize(2, 0);
  h.values.resize(0);
  Rng rng(32);
  Rng replay(32);
  ProposeOptions opt;
  opt.candidates = 40;
  const auto p = propose(OptimizerKind::gp_bo, h, 3, rng, opt);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 2; ++i) EXPECT_EQ(p.points(i, j), uniform01(replay));
  }
}

TEST(Propose, GpBoTopKOnTwoPointHistory) {
  const auto h = two_point_history();
  ProposeOptions opt;
  opt.candidates = 300;
  Rng rng(33);
  Rng replay(33);
  const auto p = propose(OptimizerKind::gp_bo, h, 3, rng, opt);
  ASSERT_TRUE(p.fitted.has_value());
  // Replay the same draws through the acquisition layer to see every candidate.
  const auto model = gp::GPModel::fit(h.points, h.values, replay, opt.fit);
  EXPECT_EQ(model.params(), *p.fitted);
  const auto full = acquisition::propose_batch(model, 1, 3, 300, 1.0,
                                               acquisition::ExpectedImprovement{}, replay);
  EXPECT_EQ(full.points, p.points);
  std::set<int> chosen(full.chosen_indices.begin(), full.chosen_indices.end());
  const double worst = *std::min_element(full.scores.begin(), full.scores.end());
  for (int i = 0; i < 300; ++i) {
    if (!chosen.count(i)) {
      EXPECT_LE(full.candidate_scores[static_cast<std::size_t>(i)], worst);
    }
  }
  EXPECT_TRUE(in_unit_cube(p.points));
}

TEST(Propose, GpBoBitReproducible) {
  const auto h = two_point_history();
  Rng a(34);
  Rng b(34);
  EXPECT_EQ(propose(OptimizerKind::gp_bo, h, 3, a).points,
            propose(OptimizerKind::gp_bo, h, 3, b).points);
}

TEST(Propose, Errors) {
  const auto h = two_point_history();
  Rng rng(35);
  EXPECT_THROW(propose(OptimizerKind::random_search, h, 0, rng), ArgumentError);
  SubspaceHistory bad = h;
  bad.indices = VariableIndexSet{0, 1};
  EXPECT_THROW(propose(OptimizerKind::gp_bo, bad, 1, rng), ArgumentError);
}

TEST(ProjectHistory, ProjectsSelectedRows) {
  EvaluationHistory hist(4);
  hist.append(Eigen::Vector4d(0.1, 0.2, 0.3, 0.4), 1.0);
  hist.append(Eigen::Vector4d(0.5, 0.6, 0.7, 0.8), 2.0);
  const auto sub = project_history(hist, VariableIndexSet{1, 3});
  ASSERT_EQ(sub.points.rows(), 2);
  ASSERT_EQ(sub.points.cols(), 2);
  EXPECT_EQ(sub.points(0, 0), 0.2);
  EXPECT_EQ(sub.points(1, 0), 0.4);
  EXPECT_EQ(sub.points(1, 1), 0.8);
  EXPECT_EQ(sub.values[1], 2.0);
  EXPECT_THROW(project_history(hist, VariableIndexSet{4}), ArgumentError);
}

TEST(ProjectHistory, CapKeepsRecentPlusBest) {
  EvaluationHistory hist(1);
  for (int i = 0; i < 30; ++i) {
    // Early points carry the largest values.
    hist.append(Eigen::VectorXd::Constant(1, i / 30.0), i < 5 ? 100.0 - i : static_cast<double>(i));
  }
  const auto sub = project_history(hist, VariableIndexSet{0}, HistoryCap{10, 3});
  ASSERT_EQ(sub.values.size(), 13);
  EXPECT_EQ(sub.values[0], 100.0);
  EXPECT_EQ(sub.values[1], 99.0);
  EXPECT_EQ(sub.values[2], 98.0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sub.values[3 + i], 20.0 + i);
  const auto uncapped = project_history(hist, VariableIndexSet{0}, HistoryCap{30, 3});
  EXPECT_EQ(uncapped.values.size(), 30);
}

}  // namespace
