#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "mctsvs/index_set.hpp"
#include "mctsvs/inner_opt.hpp"
#include "mctsvs/objective.hpp"
#include "mctsvs/random.hpp"
#include "mctsvs/trace.hpp"
#include "mctsvs/vs_core.hpp"

namespace mctsvs::mcts {

/// A node stands for a subset of variables. Node ids index Tree::nodes().
struct TreeNode {
  VariableIndexSet indices;
  double value = 0.0;  // mean score of the contained variables
  int visits = 0;
  int parent = -1;
  int left = -1;   // important (above-average score) child
  int right = -1;  // unimportant child

  [[nodiscard]] bool is_leaf() const { return left < 0; }
};

/// Binary partition tree over the variables. The root always holds every
/// index and the leaves always partition them.
class Tree {
 public:
  /// Root-only tree whose value is taken from `score`.
  Tree(int dimension, const Eigen::VectorXd& score);

  /// Back to a single fresh root (visits 0, value from `score`).
  void reset(const Eigen::VectorXd& score);

  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] const TreeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  TreeNode& node(int id) { return nodes_[static_cast<std::size_t>(id)]; }
  [[nodiscard]] const std::vector<TreeNode>& nodes() const { return nodes_; }
  [[nodiscard]] static constexpr int root() { return 0; }
  [[nodiscard]] std::vector<int> leaves() const;

  /// Attaches two fresh children to a leaf and returns their ids.
  std::pair<int, int> attach_children(int leaf, VariableIndexSet left, double left_value,
                                      VariableIndexSet right, double right_value);

 private:
  int dimension_;
  std::vector<TreeNode> nodes_;
};

/// s . g(A) / |A|. Throws ArgumentError for an empty set.
double node_value(const Eigen::VectorXd& score, const VariableIndexSet& indices);

/// v + 2 Cp sqrt(2 ln(n_parent) / n), or +inf for an unvisited node.
double node_ucb(const TreeNode& node, int parent_visits, double cp);

struct LeafSelection {
  int leaf = Tree::root();
  std::vector<int> path;  // root first, leaf last
  int right_visits = 0;
};

/// Descends from the root taking the child with the larger UCB; exact ties
/// (including two unvisited children) are broken by a fair coin.
LeafSelection select_leaf(const Tree& tree, double cp, Rng& rng);

/// Includes each index independently with probability 1/2, redrawing until
/// the result is a proper non-empty subset. Sets with fewer than two
/// elements are returned unchanged.
VariableIndexSet sample_subset(const VariableIndexSet& indices, Rng& rng);

/// Splits a leaf into variables scoring strictly above the leaf's mean
/// score (left) and the rest (right). Returns false, leaving the tree
/// untouched, when one side would be empty.
bool bifurcate(Tree& tree, int leaf, const Eigen::VectorXd& score);

/// Refreshes value and increments visits of every node on `path`.
void backpropagate(Tree& tree, const std::vector<int>& path, const Eigen::VectorXd& score);

struct MctsVsConfig {
  int n_v = 2;             // variable-subset batch size
  int n_s = 3;             // sample batch size
  std::int64_t n_e = 600;  // evaluation budget
  int n_bad = 5;           // re-initialization threshold
  int n_split = 3;         // leaves with at most this many variables are not split
  int k = 20;              // best-k buffer capacity
  double cp = 0.1;
  OptimizerKind optimizer = OptimizerKind::gp_bo;
  FillStrategy fill = FillStrategy::best_k;
  std::uint64_t seed = 0;
  ProposeOptions propose;
  HistoryCap history_cap;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

/// Per-iteration diagnostics alongside the evaluation trace.
struct IterationInfo {
  VariableIndexSet leaf;
  int depth = 0;
  bool reinitialized = false;
  bool split = false;
};

struct MctsVsResult {
  RunTrace trace;
  std::vector<IterationInfo> iterations;
};

/// Runs MCTS variable selection to the evaluation budget. Every record's
/// selected set is the leaf chosen in its iteration (the variables of the
/// initial design's subsets for the first 2 N_v N_s records).
MctsVsResult mcts_vs_run(const ObjectiveSpec& spec, const MctsVsConfig& config);

}  // namespace mctsvs::mcts
