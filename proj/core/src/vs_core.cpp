#include "mctsvs/vs_core.hpp"

#include <algorithm>

#include "mctsvs/errors.hpp"
#include "mctsvs/lhs.hpp"

namespace mctsvs {

InformationSet::InformationSet(int dimension) : dimension_(dimension) {
  if (dimension <= 0) throw ArgumentError("information set dimension must be positive");
}

void InformationSet::add(VariableIndexSet indices, std::vector<EvaluatedPoint> samples) {
  if (samples.empty()) throw ArgumentError("information set entries need at least one sample");
  if (indices.empty()) throw ArgumentError("information set entries need a non-empty index set");
  if (indices.bound() > dimension_) throw ArgumentError("index outside information set dimension");
  entries_.push_back({std::move(indices), std::move(samples)});
}

bool InformationSet::covers_all() const {
  std::vector<bool> seen(static_cast<std::size_t>(dimension_), false);
  for (const auto& e : entries_) {
    for (int i : e.indices) seen[static_cast<std::size_t>(i)] = true;
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

Eigen::VectorXd variable_score(const InformationSet& info) {
  const int d = info.dimension();
  Eigen::VectorXd numerator = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd denominator = Eigen::VectorXd::Zero(d);
  for (const auto& e : info.entries()) {
    double y_sum = 0.0;
    for (const auto& s : e.samples) y_sum += s.y;
    const Eigen::VectorXd g = boolean_mask(e.indices, d);
    numerator += y_sum * g;
    denominator += static_cast<double>(e.samples.size()) * g;
  }
  for (int i = 0; i < d; ++i) {
    if (denominator[i] == 0.0) {
      throw CoverageError("variable " + std::to_string(i) + " has never been queried");
    }
  }
  return numerator.cwiseQuotient(denominator);
}

BestKBuffer::BestKBuffer(int capacity) : capacity_(capacity) {
  if (capacity <= 0) throw ArgumentError("best-k capacity must be positive");
  entries_.reserve(static_cast<std::size_t>(capacity) + 1);
}

void BestKBuffer::update(const EvaluatedPoint& point) {
  if (static_cast<int>(entries_.size()) == capacity_ && point.y <= entries_.back().y) return;
  // Insert after every entry with y >= point.y so ties keep first-seen order.
  const auto pos = std::upper_bound(
      entries_.begin(), entries_.end(), point.y,
      [](double y, const EvaluatedPoint& e) { return y > e.y; });
  entries_.insert(pos, point);
  if (static_cast<int>(entries_.size()) > capacity_) entries_.pop_back();
}

void BestKBuffer::update(const std::vector<EvaluatedPoint>& batch) {
  for (const auto& p : batch) update(p);
}

BestKBuffer update_best_k(BestKBuffer buffer, const std::vector<EvaluatedPoint>& batch) {
  buffer.update(batch);
  return buffer;
}

const char* to_string(FillStrategy strategy) {
  switch (strategy) {
    case FillStrategy::best_k:
      return "best_k";
    case FillStrategy::average_best_k:
      return "average_best_k";
    case FillStrategy::random_uniform:
      return "random_uniform";
  }
  return "?";
}

FillStrategy fill_strategy_from_string(const std::string& name) {
  if (name == "best_k") return FillStrategy::best_k;
  if (name == "average_best_k") return FillStrategy::average_best_k;
  if (name == "random_uniform" || name == "random") return FillStrategy::random_uniform;
  throw ConfigError("unknown fill strategy '" + name + "'");
}

std::map<int, double> fill_in(FillStrategy strategy, const VariableIndexSet& selected,
                              const BestKBuffer& buffer, const ObjectiveSpec& spec, Rng& rng) {
  if (strategy != FillStrategy::random_uniform && buffer.empty()) {
    throw StateError("best-k fill-in needs a non-empty buffer");
  }
  const int d = spec.dimension();
  if (selected.bound() > d) throw ArgumentError("selected index outside objective dimension");
  const auto& entries = buffer.entries();
  std::map<int, double> out;
  for (int i = 0; i < d; ++i) {
    if (selected.contains(i)) continue;
    switch (strategy) {
      case FillStrategy::best_k:
        out[i] = entries[uniform_index(rng, entries.size())].x[i];
        break;
      case FillStrategy::average_best_k: {
        double sum = 0.0;
        for (const auto& e : entries) sum += e.x[i];
        out[i] = std::clamp(sum / static_cast<double>(entries.size()), spec.lower()[i],
                            spec.upper()[i]);
        break;
      }
      case FillStrategy::random_uniform:
        out[i] = uniform(rng, spec.lower()[i], spec.upper()[i]);
        break;
    }
  }
  return out;
}

Eigen::VectorXd assemble_point(const ObjectiveSpec& spec, const VariableIndexSet& selected,
                               const Eigen::VectorXd& unit_subspace_point,
                               const std::map<int, double>& filled) {
  if (unit_subspace_point.size() != static_cast<Eigen::Index>(selected.size())) {
    throw ArgumentError("subspace point does not match the selected set");
  }
  Eigen::VectorXd x(spec.dimension());
  for (const auto& [i, v] : filled) x[i] = v;
  for (std::size_t j = 0; j < selected.size(); ++j) {
    const int i = selected[j];
    const double u = std::clamp(unit_subspace_point[static_cast<Eigen::Index>(j)], 0.0, 1.0);
    x[i] = std::min(spec.lower()[i] + u * (spec.upper()[i] - spec.lower()[i]), spec.upper()[i]);
  }
  return x;
}

VariableIndexSet random_subset_of_size(int dimension, int size, Rng& rng) {
  if (size < 1 || size > dimension) throw ArgumentError("subset size must lie in [1, D]");
  // Partial Fisher-Yates.
  std::vector<int> pool(static_cast<std::size_t>(dimension));
  for (int i = 0; i < dimension; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int j = 0; j < size; ++j) {
    const auto pick = static_cast<std::size_t>(j) +
                      uniform_index(rng, static_cast<std::size_t>(dimension - j));
    std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
  }
  pool.resize(static_cast<std::size_t>(size));
  return VariableIndexSet(std::move(pool));
}

RunTrace dropout_run(const ObjectiveSpec& spec, const DropoutConfig& config) {
  const int dim = spec.dimension();
  if (config.subset_size < 1 || config.subset_size > dim) {
    throw ArgumentError("dropout subset size must lie in [1, D]");
  }
  if (config.batch < 1 || config.budget < 1) throw ArgumentError("dropout needs batch, budget >= 1");

  Rng rng(config.seed);
  TraceRecorder recorder(spec, config.optimizer == OptimizerKind::gp_bo ? "dropout_bo" : "dropout_rs", config.seed);
  EvaluationHistory history(dim);
  BestKBuffer buffer(config.k);
  const VariableIndexSet all = VariableIndexSet::all(dim);

  const auto n_init =
      static_cast<int>(std::min<std::int64_t>(std::max(config.initial_points, 1), config.budget));
  const Eigen::MatrixXd design = lhs_sample(n_init, dim, rng);
  for (int j = 0; j < n_init; ++j) {
    const Eigen::VectorXd x = spec.from_unit(design.col(j));
    recorder.tag_next(event::init);
    const double y = recorder.evaluate(x, all, 1.0);
    history.append(spec.to_unit(x), y);
    buffer.update({x, y});
  }

  std::optional<gp::KernelParams> warm;
  while (recorder.evaluations() < config.budget) {
    const VariableIndexSet subset = random_subset_of_size(dim, config.subset_size, rng);
    const int batch = static_cast<int>(
        std::min<std::int64_t>(config.batch, config.budget - recorder.evaluations()));
    const Proposal proposal = propose(config.optimizer,
                                      project_history(history, subset, config.history_cap), batch,
                                      rng, config.propose, warm);
    if (proposal.fitted) warm = proposal.fitted;
    const double rec = recall(subset, spec);
    std::vector<EvaluatedPoint> evaluated;
    for (int j = 0; j < batch; ++j) {
      const auto filled = fill_in(config.fill, subset, buffer, spec, rng);
      evaluated.push_back({assemble_point(spec, subset, proposal.points.col(j), filled), 0.0});
    }
    for (auto& p : evaluated) {
      p.y = recorder.evaluate(p.x, subset, rec);
      history.append(spec.to_unit(p.x), p.y);
    }
    buffer.update(evaluated);
  }
  return recorder.take();
}

}  // namespace mctsvs
