#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mctsvs/index_set.hpp"

namespace mctsvs {

/// A boxed D-dimensional objective, maximization convention.
///
/// The evaluator only ever sees points that passed the bounds check in
/// evaluate(). Instances are immutable and may be shared across threads.
class ObjectiveSpec {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  ObjectiveSpec(std::string name, Eigen::VectorXd lower, Eigen::VectorXd upper,
                VariableIndexSet valid_indices, Evaluator evaluator, double noise_std = 0.0);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] int dimension() const { return static_cast<int>(lower_.size()); }
  [[nodiscard]] const Eigen::VectorXd& lower() const { return lower_; }
  [[nodiscard]] const Eigen::VectorXd& upper() const { return upper_; }
  [[nodiscard]] const VariableIndexSet& valid_indices() const { return valid_; }
  [[nodiscard]] double noise_std() const { return noise_std_; }

  /// Throws DomainError when x has the wrong size or leaves the box.
  [[nodiscard]] double evaluate(const Eigen::VectorXd& x) const;

  /// Maps a point of the unit cube onto the box (coordinate-wise affine).
  [[nodiscard]] Eigen::VectorXd from_unit(const Eigen::VectorXd& u) const;
  [[nodiscard]] Eigen::VectorXd to_unit(const Eigen::VectorXd& x) const;

 private:
  std::string name_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  VariableIndexSet valid_;
  Evaluator evaluator_;
  double noise_std_;
};

struct EvaluatedPoint {
  Eigen::VectorXd x;
  double y = 0.0;
};

/// Negated Hartmann-6 on [0,1]^6; global maximum ~3.32237.
double hartmann6(std::span<const double> x);

/// Negated Levy on [-10,10]^d; global maximum 0 at (1,...,1).
double levy(std::span<const double> x);

ObjectiveSpec make_hartmann6();
ObjectiveSpec make_levy(int dimension);

/// Appends target_dimension - base.dimension() unrelated [0,1] coordinates.
ObjectiveSpec extend_with_dummies(const ObjectiveSpec& base, int target_dimension);

/// sum_j weights[j] * hartmann6(x[6j .. 6j+5]), padded with dummies to
/// target_dimension.
ObjectiveSpec mix_hartmann(int copies, const std::vector<double>& weights, int target_dimension);

/// |selected ∩ valid| / |valid|.
double recall(const VariableIndexSet& selected, const ObjectiveSpec& spec);

/// Names understood by make_problem().
std::vector<std::string> registered_problems();

/// Builds a registered benchmark by name, e.g. "hartmann6_300",
/// "levy10_100", "hartmann6_5_500_v". Throws ConfigError for unknown names.
ObjectiveSpec make_problem(const std::string& name);

/// Default exploration constant C_p for a registered problem family
/// (Levy 10, Hartmann 0.1).
double default_cp(const std::string& problem_name);

}  // namespace mctsvs
