#include "mctsvs/inner_opt.hpp"

#include <algorithm>
#include <numeric>

#include "mctsvs/acquisition.hpp"
#include "mctsvs/errors.hpp"

namespace mctsvs {

const char* to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::gp_bo:
      return "gp_bo";
    case OptimizerKind::random_search:
      return "random_search";
  }
  return "?";
}

OptimizerKind optimizer_from_string(const std::string& name) {
  if (name == "gp_bo" || name == "bo") return OptimizerKind::gp_bo;
  if (name == "random_search" || name == "rs") return OptimizerKind::random_search;
  throw ConfigError("unknown optimizer '" + name + "'");
}

EvaluationHistory::EvaluationHistory(int dimension)
    : dimension_(dimension), points_(dimension, 64), values_(64) {
  if (dimension <= 0) throw ArgumentError("history dimension must be positive");
}

void EvaluationHistory::append(const Eigen::VectorXd& unit_x, double y) {
  if (unit_x.size() != dimension_) throw ArgumentError("history point has wrong dimension");
  if (count_ == points_.cols()) {
    points_.conservativeResize(Eigen::NoChange, 2 * count_);
    values_.conservativeResize(2 * count_);
  }
  points_.col(count_) = unit_x;
  values_[count_] = y;
  ++count_;
}

SubspaceHistory project_history(const EvaluationHistory& history, const VariableIndexSet& indices,
                                const HistoryCap& cap) {
  if (indices.bound() > history.dimension()) {
    throw ArgumentError("subspace index outside history dimension");
  }
  const Eigen::Index n = history.size();
  std::vector<Eigen::Index> keep;
  if (cap.recent > 0 && n > cap.recent) {
    const Eigen::Index first_recent = n - cap.recent;
    std::vector<Eigen::Index> older(static_cast<std::size_t>(first_recent));
    std::iota(older.begin(), older.end(), Eigen::Index{0});
    const auto values = history.values();
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(std::max(cap.best, 0)),
                                            older.size());
    std::partial_sort(older.begin(), older.begin() + static_cast<std::ptrdiff_t>(take),
                      older.end(), [&](Eigen::Index a, Eigen::Index b) {
                        return values[a] > values[b] || (values[a] == values[b] && a < b);
                      });
    older.resize(take);
    // The best-k points among the older ones; recent ones are kept anyway.
    std::sort(older.begin(), older.end());
    keep = std::move(older);
    for (Eigen::Index i = first_recent; i < n; ++i) keep.push_back(i);
  } else {
    keep.resize(static_cast<std::size_t>(n));
    std::iota(keep.begin(), keep.end(), Eigen::Index{0});
  }

  SubspaceHistory out;
  out.indices = indices;
  const auto m = static_cast<Eigen::Index>(indices.size());
  out.points.resize(m, static_cast<Eigen::Index>(keep.size()));
  out.values.resize(static_cast<Eigen::Index>(keep.size()));
  const auto points = history.points();
  const auto values = history.values();
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    for (Eigen::Index r = 0; r < m; ++r) {
      out.points(r, col) = points(indices[static_cast<std::size_t>(r)], keep[c]);
    }
    out.values[col] = values[keep[c]];
  }
  return out;
}

Proposal propose(OptimizerKind kind, const SubspaceHistory& history, int batch, Rng& rng,
                 const ProposeOptions& options, std::optional<gp::KernelParams> warm_start) {
  if (batch < 1) throw ArgumentError("propose requires batch >= 1");
  const auto dim = static_cast<int>(history.indices.size());
  if (dim == 0) throw ArgumentError("propose requires a non-empty subspace");
  if (history.points.rows() != dim || history.points.cols() != history.values.size()) {
    throw ArgumentError("subspace history has inconsistent shape");
  }

  Proposal out;
  if (kind == OptimizerKind::random_search) {
    out.points.resize(dim, batch);
    for (int j = 0; j < batch; ++j) {
      for (int i = 0; i < dim; ++i) out.points(i, j) = uniform01(rng);
    }
    return out;
  }

  const int candidates = std::max(
      batch, options.candidates > 0 ? options.candidates
                                    : acquisition::default_candidate_count(dim));
  if (history.values.size() == 0) {
    const gp::GPModel prior(dim, warm_start.value_or(gp::KernelParams{}));
    out.points = acquisition::propose_batch(prior, dim, batch, candidates, 0.0,
                                            acquisition::ExpectedImprovement{}, rng)
                     .points;
    return out;
  }
  const gp::GPModel model =
      gp::GPModel::fit(history.points, history.values, rng, options.fit, warm_start);
  out.fitted = model.params();
  out.points = acquisition::propose_batch(model, dim, batch, candidates, history.values.maxCoeff(),
                                          acquisition::ExpectedImprovement{}, rng)
                   .points;
  return out;
}

}  // namespace mctsvs
