#include "mctsvs/objective.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mctsvs/errors.hpp"

namespace mctsvs {

namespace {

// Standard Hartmann-6 parameterization (Hartman 1973; as tabulated in the
// Surjanovic & Bingham virtual library of simulation experiments).
constexpr std::array<double, 4> kHartmannAlpha = {1.0, 1.2, 3.0, 3.2};
constexpr std::array<std::array<double, 6>, 4> kHartmannA = {{
    {10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
    {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
    {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
    {17.0, 8.0, 0.05, 10.0, 0.1, 14.0},
}};
constexpr std::array<std::array<double, 6>, 4> kHartmannP = {{
    {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
    {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
    {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
    {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381},
}};

void check_box(std::span<const double> x, double lo, double hi, const char* what) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo && x[i] <= hi)) {
      std::ostringstream msg;
      msg << what << ": coordinate " << i << " = " << x[i] << " outside [" << lo << ", " << hi
          << "]";
      throw DomainError(msg.str());
    }
  }
}

double hartmann6_unchecked(std::span<const double> x) {
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      const double diff = x[j] - kHartmannP[i][j];
      inner += kHartmannA[i][j] * diff * diff;
    }
    total += kHartmannAlpha[i] * std::exp(-inner);
  }
  return total;
}

// "<family><base>_<D>" or "hartmann6_<copies>_<D>[_v]"
std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

int parse_positive(const std::string& s, const std::string& name) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("unknown problem '" + name + "'");
  }
  const int v = std::stoi(s);
  if (v <= 0) throw ConfigError("unknown problem '" + name + "'");
  return v;
}

}  // namespace

ObjectiveSpec::ObjectiveSpec(std::string name, Eigen::VectorXd lower, Eigen::VectorXd upper,
                             VariableIndexSet valid_indices, Evaluator evaluator,
                             double noise_std)
    : name_(std::move(name)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      valid_(std::move(valid_indices)),
      evaluator_(std::move(evaluator)),
      noise_std_(noise_std) {
  if (lower_.size() == 0 || lower_.size() != upper_.size()) {
    throw ArgumentError("objective bounds must be non-empty and of equal length");
  }
  if (!((upper_ - lower_).array() > 0.0).all()) {
    throw ArgumentError("objective bounds require lo < hi in every coordinate");
  }
  if (valid_.empty() || valid_.bound() > dimension()) {
    throw ArgumentError("valid indices must be a non-empty subset of the dimensions");
  }
  if (noise_std_ < 0.0) throw ArgumentError("noise_std must be non-negative");
  if (!evaluator_) throw ArgumentError("objective requires an evaluator");
}

double ObjectiveSpec::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != lower_.size()) {
    throw DomainError(name_ + ": expected " + std::to_string(lower_.size()) +
                      " coordinates, got " + std::to_string(x.size()));
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) {
      std::ostringstream msg;
      msg << name_ << ": coordinate " << i << " = " << x[i] << " outside [" << lower_[i]
          << ", " << upper_[i] << "]";
      throw DomainError(msg.str());
    }
  }
  return evaluator_(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

Eigen::VectorXd ObjectiveSpec::from_unit(const Eigen::VectorXd& u) const {
  Eigen::VectorXd x = lower_.array() + u.array() * (upper_ - lower_).array();
  // Guard against rounding pushing a coordinate a hair past the upper bound.
  return x.cwiseMin(upper_).cwiseMax(lower_);
}

Eigen::VectorXd ObjectiveSpec::to_unit(const Eigen::VectorXd& x) const {
  return ((x - lower_).array() / (upper_ - lower_).array()).matrix();
}

double hartmann6(std::span<const double> x) {
  if (x.size() != 6) throw DomainError("hartmann6 expects 6 coordinates");
  check_box(x, 0.0, 1.0, "hartmann6");
  return hartmann6_unchecked(x);
}

double levy(std::span<const double> x) {
  if (x.empty()) throw DomainError("levy expects at least one coordinate");
  check_box(x, -10.0, 10.0, "levy");
  constexpr double pi = std::numbers::pi;
  const std::size_t d = x.size();
  auto w = [&](std::size_t i) { return 1.0 + (x[i] - 1.0) / 4.0; };
  const double s0 = std::sin(pi * w(0));
  double value = s0 * s0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const double wi = w(i);
    const double s = std::sin(pi * wi + 1.0);
    value += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * s * s);
  }
  const double wd = w(d - 1);
  const double sd = std::sin(2.0 * pi * wd);
  value += (wd - 1.0) * (wd - 1.0) * (1.0 + sd * sd);
  return -value;
}

ObjectiveSpec make_hartmann6() {
  return ObjectiveSpec("hartmann6", Eigen::VectorXd::Zero(6), Eigen::VectorXd::Ones(6),
                       VariableIndexSet::all(6),
                       [](std::span<const double> x) { return hartmann6_unchecked(x); });
}

ObjectiveSpec make_levy(int dimension) {
  if (dimension <= 0) throw ArgumentError("levy dimension must be positive");
  return ObjectiveSpec("levy" + std::to_string(dimension),
                       Eigen::VectorXd::Constant(dimension, -10.0),
                       Eigen::VectorXd::Constant(dimension, 10.0),
                       VariableIndexSet::all(dimension), [](std::span<const double> x) {
                         return levy(x);
                       });
}

ObjectiveSpec extend_with_dummies(const ObjectiveSpec& base, int target_dimension) {
  const int base_d = base.dimension();
  if (target_dimension < base_d) {
    throw ArgumentError("extend_with_dummies: target dimension " +
                        std::to_string(target_dimension) + " < base dimension " +
                        std::to_string(base_d));
  }
  Eigen::VectorXd lower = Eigen::VectorXd::Zero(target_dimension);
  Eigen::VectorXd upper = Eigen::VectorXd::Ones(target_dimension);
  lower.head(base_d) = base.lower();
  upper.head(base_d) = base.upper();
  auto shared = std::make_shared<const ObjectiveSpec>(base);
  auto evaluator = [shared, base_d](std::span<const double> x) {
    return shared->evaluate(Eigen::Map<const Eigen::VectorXd>(x.data(), base_d));
  };
  return ObjectiveSpec(base.name() + "_" + std::to_string(target_dimension), std::move(lower),
                       std::move(upper), base.valid_indices(), std::move(evaluator),
                       base.noise_std());
}

ObjectiveSpec mix_hartmann(int copies, const std::vector<double>& weights, int target_dimension) {
  if (copies <= 0) throw ArgumentError("mix_hartmann: copies must be positive");
  if (static_cast<int>(weights.size()) != copies) {
    throw ArgumentError("mix_hartmann: expected " + std::to_string(copies) + " weights, got " +
                        std::to_string(weights.size()));
  }
  if (6 * copies > target_dimension) {
    throw ArgumentError("mix_hartmann: 6*copies exceeds target dimension");
  }
  auto evaluator = [weights](std::span<const double> x) {
    double total = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      total += weights[j] * hartmann6_unchecked(x.subspan(6 * j, 6));
    }
    return total;
  };
  return ObjectiveSpec("hartmann6_" + std::to_string(copies) + "_" +
                           std::to_string(target_dimension),
                       Eigen::VectorXd::Zero(target_dimension),
                       Eigen::VectorXd::Ones(target_dimension), VariableIndexSet::range(0, 6 * copies),
                       std::move(evaluator));
}

double recall(const VariableIndexSet& selected, const ObjectiveSpec& spec) {
  const auto& valid = spec.valid_indices();
  return static_cast<double>(selected.intersection(valid).size()) /
         static_cast<double>(valid.size());
}

std::vector<std::string> registered_problems() {
  return {"hartmann6_100",    "hartmann6_300",     "hartmann6_500",
          "hartmann6_1000",   "levy10_100",        "levy10_300",
          "hartmann6_5_500",  "hartmann6_10_500",  "hartmann6_5_500_v"};
}

ObjectiveSpec make_problem(const std::string& name) {
  const auto parts = split(name, '_');
  if (parts.size() == 2 && parts[0] == "hartmann6") {
    const int target = parse_positive(parts[1], name);
    if (target < 6) throw ConfigError("unknown problem '" + name + "'");
    const ObjectiveSpec spec = extend_with_dummies(make_hartmann6(), target);
    return ObjectiveSpec(name, spec.lower(), spec.upper(), spec.valid_indices(),
                         [](std::span<const double> x) { return hartmann6_unchecked(x.first(6)); });
  }
  if (parts.size() == 2 && parts[0].rfind("levy", 0) == 0) {
    const int base = parse_positive(parts[0].substr(4), name);
    const int target = parse_positive(parts[1], name);
    if (target < base) throw ConfigError("unknown problem '" + name + "'");
    ObjectiveSpec spec = extend_with_dummies(make_levy(base), target);
    return ObjectiveSpec(name, spec.lower(), spec.upper(), spec.valid_indices(),
                         [base](std::span<const double> x) { return levy(x.first(base)); });
  }
  if ((parts.size() == 3 || (parts.size() == 4 && parts[3] == "v")) && parts[0] == "hartmann6") {
    const int copies = parse_positive(parts[1], name);
    const int target = parse_positive(parts[2], name);
    std::vector<double> weights(static_cast<std::size_t>(copies), 1.0);
    if (parts.size() == 4) {
      for (int j = 0; j < copies; ++j) weights[static_cast<std::size_t>(j)] = std::pow(0.5, j);
    }
    try {
      ObjectiveSpec spec = mix_hartmann(copies, weights, target);
      return ObjectiveSpec(name, spec.lower(), spec.upper(), spec.valid_indices(),
                           [spec](std::span<const double> x) {
                             return spec.evaluate(Eigen::Map<const Eigen::VectorXd>(
                                 x.data(), static_cast<Eigen::Index>(x.size())));
                           });
    } catch (const ArgumentError&) {
      throw ConfigError("unknown problem '" + name + "'");
    }
  }
  throw ConfigError("unknown problem '" + name + "'");
}

double default_cp(const std::string& problem_name) {
  if (problem_name.rfind("levy", 0) == 0) return 10.0;
  if (problem_name.rfind("hartmann", 0) == 0) return 0.1;
  throw ConfigError("no default C_p for problem '" + problem_name + "'");
}

}  // namespace mctsvs
