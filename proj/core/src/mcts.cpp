#include "mctsvs/mcts.hpp"

#include <cmath>
#include <limits>

#include "mctsvs/errors.hpp"
#include "mctsvs/lhs.hpp"

namespace mctsvs::mcts {

Tree::Tree(int dimension, const Eigen::VectorXd& score) : dimension_(dimension) {
  if (dimension <= 0) throw ArgumentError("tree dimension must be positive");
  reset(score);
}

void Tree::reset(const Eigen::VectorXd& score) {
  if (score.size() != dimension_) throw ArgumentError("score vector has wrong dimension");
  nodes_.clear();
  TreeNode root;
  root.indices = VariableIndexSet::all(dimension_);
  root.value = node_value(score, root.indices);
  nodes_.push_back(std::move(root));
}

std::vector<int> Tree::leaves() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_leaf()) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::pair<int, int> Tree::attach_children(int leaf, VariableIndexSet left, double left_value,
                                          VariableIndexSet right, double right_value) {
  if (!node(leaf).is_leaf()) throw StateError("only leaves can be split");
  const int l = static_cast<int>(nodes_.size());
  const int r = l + 1;
  TreeNode ln;
  ln.indices = std::move(left);
  ln.value = left_value;
  ln.parent = leaf;
  TreeNode rn;
  rn.indices = std::move(right);
  rn.value = right_value;
  rn.parent = leaf;
  nodes_.push_back(std::move(ln));
  nodes_.push_back(std::move(rn));
  node(leaf).left = l;
  node(leaf).right = r;
  return {l, r};
}

double node_value(const Eigen::VectorXd& score, const VariableIndexSet& indices) {
  if (indices.empty()) throw ArgumentError("node value of an empty variable set");
  return score.dot(boolean_mask(indices, static_cast<int>(score.size()))) /
         static_cast<double>(indices.size());
}

double node_ucb(const TreeNode& node, int parent_visits, double cp) {
  if (node.visits == 0) return std::numeric_limits<double>::infinity();
  const double log_np = parent_visits > 0 ? std::log(static_cast<double>(parent_visits)) : 0.0;
  return node.value + 2.0 * cp * std::sqrt(2.0 * log_np / node.visits);
}

LeafSelection select_leaf(const Tree& tree, double cp, Rng& rng) {
  LeafSelection sel;
  int current = Tree::root();
  sel.path.push_back(current);
  while (!tree.node(current).is_leaf()) {
    const TreeNode& parent = tree.node(current);
    const double ul = node_ucb(tree.node(parent.left), parent.visits, cp);
    const double ur = node_ucb(tree.node(parent.right), parent.visits, cp);
    bool go_right = ur > ul;
    if (ul == ur) go_right = coin_flip(rng);
    current = go_right ? parent.right : parent.left;
    if (go_right) ++sel.right_visits;
    sel.path.push_back(current);
  }
  sel.leaf = current;
  return sel;
}

VariableIndexSet sample_subset(const VariableIndexSet& indices, Rng& rng) {
  if (indices.size() < 2) return indices;
  std::vector<int> chosen;
  chosen.reserve(indices.size());
  while (true) {
    chosen.clear();
    for (int i : indices) {
      if (coin_flip(rng)) chosen.push_back(i);
    }
    if (!chosen.empty() && chosen.size() < indices.size()) break;
  }
  return VariableIndexSet(std::move(chosen));
}

bool bifurcate(Tree& tree, int leaf, const Eigen::VectorXd& score) {
  const VariableIndexSet& indices = tree.node(leaf).indices;
  const double mean = node_value(score, indices);
  std::vector<int> left;
  std::vector<int> right;
  for (int i : indices) {
    (score[i] > mean ? left : right).push_back(i);
  }
  if (left.empty() || right.empty()) return false;
  VariableIndexSet ls(std::move(left));
  VariableIndexSet rs(std::move(right));
  const double lv = node_value(score, ls);
  const double rv = node_value(score, rs);
  tree.attach_children(leaf, std::move(ls), lv, std::move(rs), rv);
  return true;
}

void backpropagate(Tree& tree, const std::vector<int>& path, const Eigen::VectorXd& score) {
  for (int id : path) {
    TreeNode& n = tree.node(id);
    n.value = node_value(score, n.indices);
    ++n.visits;
  }
}

void MctsVsConfig::validate() const {
  if (n_v < 1) throw ConfigError("n_v must be positive");
  if (n_s < 1) throw ConfigError("n_s must be positive");
  if (n_e < 1) throw ConfigError("n_e must be positive");
  if (n_bad < 1) throw ConfigError("n_bad must be positive");
  if (n_split < 1) throw ConfigError("n_split must be positive");
  if (k < 1) throw ConfigError("k must be positive");
  if (!(cp >= 0.0)) throw ConfigError("cp must be non-negative");
  if (2LL * n_v * n_s > n_e) {
    throw ConfigError("budget " + std::to_string(n_e) + " is below the initial design of 2*n_v*n_s = " +
                      std::to_string(2 * n_v * n_s) + " evaluations");
  }
}

namespace {

// Mutable state of one run; confined to mcts_vs_run.
class Runner {
 public:
  Runner(const ObjectiveSpec& spec, const MctsVsConfig& config)
      : spec_(spec),
        config_(config),
        rng_(config.seed),
        recorder_(spec, config.optimizer == OptimizerKind::gp_bo ? "mcts_vs_bo" : "mcts_vs_rs",
                  config.seed),
        history_(spec.dimension()),
        info_(spec.dimension()),
        buffer_(config.k) {}

  MctsVsResult run() {
    const int dim = spec_.dimension();
    initialize();
    Eigen::VectorXd score = variable_score(info_);
    Tree tree(dim, score);
    int n_bad = 0;
    MctsVsResult result;

    while (recorder_.evaluations() < config_.n_e) {
      IterationInfo it;
      if (n_bad > config_.n_bad) {
        tree.reset(score);
        n_bad = 0;
        recorder_.tag_next(event::tree_reinit);
        ++recorder_.mutable_trace().tree_reinits;
        it.reinitialized = true;
      }
      const LeafSelection sel = select_leaf(tree, config_.cp, rng_);
      n_bad += sel.right_visits;
      const VariableIndexSet leaf = tree.node(sel.leaf).indices;
      it.leaf = leaf;
      it.depth = static_cast<int>(sel.path.size()) - 1;
      const double leaf_recall = recall(leaf, spec_);

      for (int j = 0; j < config_.n_v && !exhausted(); ++j) {
        if (leaf.size() < 2) {
          optimize_subset(leaf, leaf, leaf_recall);
          continue;
        }
        const VariableIndexSet subset = sample_subset(leaf, rng_);
        optimize_subset(subset, leaf, leaf_recall);
        if (!exhausted()) optimize_subset(leaf.difference(subset), leaf, leaf_recall);
      }

      score = variable_score(info_);
      if (static_cast<int>(leaf.size()) > config_.n_split) {
        it.split = bifurcate(tree, sel.leaf, score);
        recorder_.tag_last(it.split ? event::split : event::no_split);
      }
      backpropagate(tree, sel.path, score);
      result.iterations.push_back(std::move(it));
    }
    result.trace = recorder_.take();
    return result;
  }

 private:
  [[nodiscard]] bool exhausted() const { return recorder_.evaluations() >= config_.n_e; }

  void initialize() {
    const int dim = spec_.dimension();
    const VariableIndexSet all = VariableIndexSet::all(dim);
    for (int i = 0; i < config_.n_v; ++i) {
      const VariableIndexSet subset = dim >= 2 ? sample_subset(all, rng_) : all;
      const VariableIndexSet complement = all.difference(subset);
      for (const VariableIndexSet* part : {&subset, &complement}) {
        if (part->empty()) continue;
        const Eigen::MatrixXd design = lhs_sample(config_.n_s, dim, rng_);
        std::vector<EvaluatedPoint> batch;
        const double rec = recall(*part, spec_);
        for (int j = 0; j < config_.n_s; ++j) {
          EvaluatedPoint p{spec_.from_unit(design.col(j)), 0.0};
          recorder_.tag_next(event::init);
          p.y = recorder_.evaluate(p.x, *part, rec);
          history_.append(spec_.to_unit(p.x), p.y);
          batch.push_back(std::move(p));
        }
        buffer_.update(batch);
        info_.add(*part, std::move(batch));
      }
    }
  }

  void optimize_subset(const VariableIndexSet& subset, const VariableIndexSet& leaf,
                       double leaf_recall) {
    const int batch = static_cast<int>(
        std::min<std::int64_t>(config_.n_s, config_.n_e - recorder_.evaluations()));
    const Proposal proposal =
        propose(config_.optimizer, project_history(history_, subset, config_.history_cap), batch,
                rng_, config_.propose, warm_);
    if (proposal.fitted) warm_ = proposal.fitted;

    std::vector<EvaluatedPoint> evaluated;
    evaluated.reserve(static_cast<std::size_t>(batch));
    for (int j = 0; j < batch; ++j) {
      const auto filled = fill_in(config_.fill, subset, buffer_, spec_, rng_);
      evaluated.push_back({assemble_point(spec_, subset, proposal.points.col(j), filled), 0.0});
    }
    for (auto& p : evaluated) {
      p.y = recorder_.evaluate(p.x, leaf, leaf_recall);
      history_.append(spec_.to_unit(p.x), p.y);
    }
    buffer_.update(evaluated);
    info_.add(subset, std::move(evaluated));
  }

  const ObjectiveSpec& spec_;
  const MctsVsConfig& config_;
  Rng rng_;
  TraceRecorder recorder_;
  EvaluationHistory history_;
  InformationSet info_;
  BestKBuffer buffer_;
  std::optional<gp::KernelParams> warm_;
};

}  // namespace

MctsVsResult mcts_vs_run(const ObjectiveSpec& spec, const MctsVsConfig& config) {
  config.validate();
  return Runner(spec, config).run();
}

}  // namespace mctsvs::mcts
