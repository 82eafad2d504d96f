#include "mctsvs/baselines.hpp"

#include <algorithm>

#include "mctsvs/errors.hpp"
#include "mctsvs/lhs.hpp"

namespace mctsvs {

RunTrace vanilla_bo_run(const ObjectiveSpec& spec, const VanillaBoConfig& config) {
  if (config.batch < 1 || config.budget < 1) throw ArgumentError("vanilla BO needs batch, budget >= 1");
  const int dim = spec.dimension();
  Rng rng(config.seed);
  TraceRecorder recorder(spec, "vanilla_bo", config.seed);
  EvaluationHistory history(dim);
  const VariableIndexSet all = VariableIndexSet::all(dim);

  const auto n_init =
      static_cast<int>(std::min<std::int64_t>(std::max(config.initial_points, 1), config.budget));
  const Eigen::MatrixXd design = lhs_sample(n_init, dim, rng);
  for (int j = 0; j < n_init; ++j) {
    const Eigen::VectorXd x = spec.from_unit(design.col(j));
    recorder.tag_next(event::init);
    history.append(spec.to_unit(x), recorder.evaluate(x, all, 1.0));
  }

  std::optional<gp::KernelParams> warm;
  while (recorder.evaluations() < config.budget) {
    const int batch = static_cast<int>(
        std::min<std::int64_t>(config.batch, config.budget - recorder.evaluations()));
    const Proposal proposal = propose(OptimizerKind::gp_bo,
                                      project_history(history, all, config.history_cap), batch, rng,
                                      config.propose, warm);
    if (proposal.fitted) warm = proposal.fitted;
    for (int j = 0; j < batch; ++j) {
      const Eigen::VectorXd x = spec.from_unit(proposal.points.col(j));
      history.append(spec.to_unit(x), recorder.evaluate(x, all, 1.0));
    }
  }
  return recorder.take();
}

RunTrace random_search_run(const ObjectiveSpec& spec, std::int64_t budget, std::uint64_t seed) {
  if (budget < 1) throw ArgumentError("random search needs budget >= 1");
  Rng rng(seed);
  TraceRecorder recorder(spec, "random_search", seed);
  const VariableIndexSet all = VariableIndexSet::all(spec.dimension());
  Eigen::VectorXd u(spec.dimension());
  while (recorder.evaluations() < budget) {
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = uniform01(rng);
    recorder.evaluate(spec.from_unit(u), all, 1.0);
  }
  return recorder.take();
}

}  // namespace mctsvs
