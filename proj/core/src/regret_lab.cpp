#include "mctsvs/regret_lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>
#include <nlohmann/json.hpp>

#include "mctsvs/errors.hpp"
#include "mctsvs/parallel.hpp"

namespace mctsvs::regret {

namespace {

constexpr int kMaxDimension = 4;

std::size_t ipow(std::size_t base, int exponent) {
  std::size_t out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

Eigen::MatrixXd grid_matrix(const GridWorld& world) {
  const std::size_t n = world.point_count();
  Eigen::MatrixXd pts(world.dimension, static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) pts.col(static_cast<Eigen::Index>(j)) = world.point(j);
  return pts;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto* first = item.data();
    const auto* last = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      throw ConfigError("invalid number '" + item + "' in " + what);
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty list in " + what);
  return out;
}

VariableIndexSet parse_index_list(const std::string& text, int dimension, const std::string& what) {
  std::vector<int> idx;
  for (double v : parse_numbers(text, what)) {
    if (v != std::floor(v) || v < 0 || v >= dimension) {
      throw ConfigError("index out of range in " + what);
    }
    idx.push_back(static_cast<int>(v));
  }
  return VariableIndexSet(idx);
}

}  // namespace

void GridWorld::validate() const {
  if (dimension < 1 || dimension > kMaxDimension) {
    throw ArgumentError("grid dimension must be in [1, 4]");
  }
  if (resolution < 2) throw ArgumentError("grid resolution must be at least 2");
  if (!(upper > 0.0)) throw ArgumentError("grid upper bound must be positive");
  if (!(kernel.signal_variance > 0.0) || !(kernel.length_scale > 0.0) ||
      !(kernel.noise_variance >= 0.0)) {
    throw ArgumentError("invalid kernel parameters");
  }
  if (point_count() > kMaxPoints) {
    throw ResourceError("grid has " + std::to_string(point_count()) + " points, cap is " +
                        std::to_string(kMaxPoints));
  }
}

std::size_t GridWorld::point_count() const {
  return ipow(static_cast<std::size_t>(resolution), dimension);
}

Eigen::VectorXd GridWorld::point(std::size_t flat) const {
  Eigen::VectorXd p(dimension);
  for (int i = 0; i < dimension; ++i) {
    p[i] = static_cast<double>(flat % resolution) * step();
    flat /= resolution;
  }
  return p;
}

std::vector<int> GridWorld::grid_coords(std::size_t flat) const {
  std::vector<int> c(dimension);
  for (int i = 0; i < dimension; ++i) {
    c[i] = static_cast<int>(flat % resolution);
    flat /= resolution;
  }
  return c;
}

std::size_t GridWorld::flat_index(const std::vector<int>& coords) const {
  std::size_t flat = 0;
  for (int i = dimension - 1; i >= 0; --i) flat = flat * resolution + coords[i];
  return flat;
}

namespace {

SampledFunction finalize(std::vector<double> values) {
  SampledFunction f;
  f.values = std::move(values);
  const auto it = std::max_element(f.values.begin(), f.values.end());
  f.argmax = static_cast<std::size_t>(it - f.values.begin());
  f.max_value = *it;
  return f;
}

}  // namespace

SampledFunction sample_gp_function(const GridWorld& world, Rng& rng) {
  world.validate();
  const std::size_t n = world.point_count();
  if (n * n * sizeof(double) > GridWorld::kMaxCovarianceBytes) {
    throw ResourceError("grid covariance for " + std::to_string(n) +
                        " points exceeds the memory cap");
  }
  const Eigen::MatrixXd pts = grid_matrix(world);
  const double inv_two_l2 = 0.5 / (world.kernel.length_scale * world.kernel.length_scale);
  Eigen::MatrixXd k = (gp::squared_distances(pts, pts).array() * -inv_two_l2).exp() *
                      world.kernel.signal_variance;
  double jitter = 1e-10 * world.kernel.signal_variance;
  Eigen::LLT<Eigen::MatrixXd> llt;
  for (int attempt = 0;; ++attempt) {
    Eigen::MatrixXd kj = k;
    kj.diagonal().array() += jitter;
    llt.compute(kj);
    if (llt.info() == Eigen::Success) break;
    if (attempt == 10) throw DataError("grid covariance is not positive definite");
    jitter *= 10.0;
  }
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = standard_normal(rng);
  const Eigen::VectorXd v = llt.matrixL() * z;
  return finalize(std::vector<double>(v.data(), v.data() + v.size()));
}

SampledFunction tabulate(const GridWorld& world,
                         const std::function<double(const Eigen::VectorXd&)>& f) {
  world.validate();
  std::vector<double> values(world.point_count());
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = f(world.point(j));
  return finalize(std::move(values));
}

LipschitzEstimate estimate_alpha_star(const SampledFunction& f, const GridWorld& world) {
  world.validate();
  if (f.values.size() != world.point_count()) {
    throw ArgumentError("function does not match the grid");
  }
  LipschitzEstimate out;
  out.alpha_l = Eigen::VectorXd::Zero(world.dimension);
  const double h = world.step();
  std::size_t stride = 1;
  for (int i = 0; i < world.dimension; ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < f.values.size(); ++j) {
      if ((j / stride) % world.resolution == static_cast<std::size_t>(world.resolution - 1)) {
        continue;
      }
      best = std::max(best, std::abs(f.values[j + stride] - f.values[j]));
    }
    out.alpha_l[i] = best / h;
    stride *= world.resolution;
  }
  out.alpha_max_l = out.alpha_l.maxCoeff();
  return out;
}

double BoundParams::pi_t(int t) {
  return std::numbers::pi * std::numbers::pi * static_cast<double>(t) * t / 6.0;
}

double BoundParams::lipschitz_scale(int dimension) const {
  return b * std::sqrt(std::log(4.0 * dimension * a / delta));
}

double BoundParams::c1() const {
  if (!(noise_variance > 0.0)) throw ArgumentError("noise variance must be positive");
  return 8.0 / std::log1p(1.0 / noise_variance);
}

double beta_t(int t, int selected_count, const BoundParams& params, int dimension, double upper) {
  if (t < 1) throw ArgumentError("beta_t needs t >= 1");
  if (selected_count < 1 || selected_count > dimension) {
    throw ArgumentError("beta_t needs 1 <= d_t <= D");
  }
  if (!(params.delta > 0.0 && params.delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
  const double dt = selected_count;
  const double tt = static_cast<double>(t) * t;
  return 2.0 * std::log(4.0 * BoundParams::pi_t(t) / params.delta) +
         2.0 * dt *
             std::log(dt * tt * params.b * upper *
                      std::sqrt(std::log(4.0 * dimension * params.a / params.delta)));
}

SelectionPolicy full_selection(int dimension) {
  return [all = VariableIndexSet::all(dimension)](int, Rng&) { return all; };
}

SelectionPolicy fixed_selection(VariableIndexSet indices) {
  if (indices.empty()) throw ArgumentError("selection must not be empty");
  return [indices = std::move(indices)](int, Rng&) { return indices; };
}

SelectionPolicy drop_selection(int dimension, const VariableIndexSet& dropped) {
  return fixed_selection(VariableIndexSet::all(dimension).difference(dropped));
}

SelectionPolicy random_selection(int dimension, int subset_size) {
  if (subset_size < 1 || subset_size > dimension) {
    throw ArgumentError("random selection size must lie in [1, D]");
  }
  return [dimension, subset_size](int, Rng& rng) {
    std::vector<int> idx(dimension);
    for (int i = 0; i < dimension; ++i) idx[i] = i;
    shuffle(idx, rng);
    idx.resize(subset_size);
    return VariableIndexSet(idx);
  };
}

RegretTrace gp_ucb_vs_run(const GridWorld& world, const SampledFunction& f,
                          const SelectionPolicy& policy, int horizon, const BoundParams& params,
                          Rng& rng) {
  world.validate();
  if (horizon < 1) throw ArgumentError("horizon must be at least 1");
  if (f.values.size() != world.point_count()) {
    throw ArgumentError("function does not match the grid");
  }
  const int dim = world.dimension;
  const int tau = world.resolution;
  const double noise_std = std::sqrt(params.noise_variance);

  RegretTrace trace;
  std::vector<std::vector<int>> history_coords;
  std::vector<double> history_y;
  double cumulative = 0.0;

  for (int t = 1; t <= horizon; ++t) {
    const VariableIndexSet selected = policy(t, rng);
    if (selected.empty() || selected.bound() > dim) {
      throw ArgumentError("policy returned an invalid index set");
    }
    const int dt = static_cast<int>(selected.size());
    const std::size_t sub_count = ipow(static_cast<std::size_t>(tau), dt);

    Eigen::MatrixXd sub_points(dt, static_cast<Eigen::Index>(sub_count));
    for (std::size_t s = 0; s < sub_count; ++s) {
      std::size_t rest = s;
      for (int j = 0; j < dt; ++j) {
        sub_points(j, static_cast<Eigen::Index>(s)) = static_cast<double>(rest % tau) * world.step();
        rest /= tau;
      }
    }

    Eigen::VectorXd mean;
    Eigen::VectorXd var;
    if (history_y.empty()) {
      gp::GPModel(dt, world.kernel).posterior(sub_points, mean, var);
    } else {
      const auto n = static_cast<Eigen::Index>(history_y.size());
      Eigen::MatrixXd x(dt, n);
      for (Eigen::Index c = 0; c < n; ++c) {
        for (int j = 0; j < dt; ++j) {
          x(j, c) = static_cast<double>(history_coords[c][selected[j]]) * world.step();
        }
      }
      const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(history_y.data(), n);
      gp::GPModel::condition(std::move(x), y, world.kernel, false).posterior(sub_points, mean, var);
    }

    const double beta = beta_t(t, dt, params, dim, world.upper);
    const double root_beta = std::sqrt(beta);
    Eigen::Index best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Eigen::Index s = 0; s < mean.size(); ++s) {
      const double score = mean[s] + root_beta * std::sqrt(var[s]);
      if (score > best_score) {
        best_score = score;
        best = s;
      }
    }
    const double sigma = std::sqrt(var[best]);

    // Pessimistic completion: the grid minimizer over unselected coordinates.
    std::vector<int> coords(dim, 0);
    {
      std::size_t rest = static_cast<std::size_t>(best);
      for (int j = 0; j < dt; ++j) {
        coords[selected[j]] = static_cast<int>(rest % tau);
        rest /= tau;
      }
    }
    std::vector<int> free_dims;
    for (int i = 0; i < dim; ++i) {
      if (!selected.contains(i)) free_dims.push_back(i);
    }
    const std::size_t completions = ipow(static_cast<std::size_t>(tau), static_cast<int>(free_dims.size()));
    std::size_t chosen = 0;
    double chosen_value = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < completions; ++c) {
      std::size_t rest = c;
      for (int i : free_dims) {
        coords[i] = static_cast<int>(rest % tau);
        rest /= tau;
      }
      const std::size_t flat = world.flat_index(coords);
      if (f.values[flat] < chosen_value) {
        chosen_value = f.values[flat];
        chosen = flat;
      }
    }

    const double regret = f.max_value - chosen_value;
    cumulative += regret;
    trace.info_gain_surrogate += std::log1p(sigma * sigma / params.noise_variance);
    trace.steps.push_back({selected, chosen, regret, sigma, beta, cumulative});

    history_coords.push_back(world.grid_coords(chosen));
    history_y.push_back(chosen_value + noise_std * standard_normal(rng));
  }
  return trace;
}

double selection_term(const RegretTrace& trace, const Eigen::VectorXd& alpha_l, double upper) {
  double total = 0.0;
  for (const auto& step : trace.steps) {
    for (Eigen::Index i = 0; i < alpha_l.size(); ++i) {
      if (!step.selected.contains(static_cast<int>(i))) total += alpha_l[i] * upper;
    }
  }
  return 2.0 * total;
}

BoundReport bound_check(const RegretTrace& trace, const BoundParams& params,
                        const Eigen::VectorXd& alpha_l, double alpha_max_l, double upper) {
  if (trace.steps.empty()) throw ArgumentError("bound check needs a non-empty trace");
  const int dim = static_cast<int>(alpha_l.size());
  BoundReport r;
  r.horizon = static_cast<int>(trace.steps.size());
  r.cumulative_regret = trace.cumulative_regret();
  for (const auto& step : trace.steps) r.ucb_term += 2.0 * std::sqrt(step.beta) * step.sigma;
  r.lipschitz_scale = params.lipschitz_scale(dim);
  r.alpha_max = alpha_max_l / r.lipschitz_scale;
  r.discretization_term = 2.0 * r.alpha_max;
  r.selection_term = selection_term(trace, alpha_l, upper);
  r.bound = r.ucb_term + r.discretization_term + r.selection_term;
  r.holds = r.cumulative_regret <= r.bound;
  r.bound_without_selection = r.ucb_term + r.discretization_term;
  r.holds_without_selection = r.cumulative_regret <= r.bound_without_selection;

  int max_dt = 1;
  for (const auto& step : trace.steps) max_dt = std::max(max_dt, static_cast<int>(step.selected.size()));
  r.beta_star = beta_t(r.horizon, max_dt, params, dim, upper);
  r.info_gain_surrogate = trace.info_gain_surrogate;
  r.closed_form_bound =
      std::sqrt(params.c1() * r.horizon * r.beta_star * r.info_gain_surrogate / 2.0) +
      r.discretization_term + r.selection_term;
  r.closed_form_holds = r.cumulative_regret <= r.closed_form_bound;
  return r;
}

int LabReport::holds_count() const {
  return static_cast<int>(
      std::count_if(runs.begin(), runs.end(), [](const LabRun& r) { return r.report.holds; }));
}

int LabReport::holds_without_selection_count() const {
  return static_cast<int>(std::count_if(runs.begin(), runs.end(), [](const LabRun& r) {
    return r.report.holds_without_selection;
  }));
}

SelectionPolicy parse_policy(const std::string& text, int dimension) {
  if (text == "full") return full_selection(dimension);
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("unknown policy '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (kind == "fixed") return fixed_selection(parse_index_list(arg, dimension, "policy"));
  if (kind == "drop") {
    const auto dropped = parse_index_list(arg, dimension, "policy");
    if (static_cast<int>(dropped.size()) >= dimension) {
      throw ConfigError("policy drops every coordinate");
    }
    return drop_selection(dimension, dropped);
  }
  if (kind == "random") {
    const auto v = parse_numbers(arg, "policy");
    if (v.size() != 1 || v[0] != std::floor(v[0]) || v[0] < 1 || v[0] > dimension) {
      throw ConfigError("random policy size must lie in [1, D]");
    }
    return random_selection(dimension, static_cast<int>(v[0]));
  }
  throw ConfigError("unknown policy '" + text + "'");
}

LabReport run_regret_lab(const LabConfig& config) {
  config.world.validate();
  if (config.runs < 1) throw ConfigError("runs must be at least 1");
  if (config.horizon < 1) throw ConfigError("horizon must be at least 1");
  const SelectionPolicy policy = parse_policy(config.policy, config.world.dimension);

  std::vector<double> linear;
  if (config.function.rfind("linear:", 0) == 0) {
    linear = parse_numbers(config.function.substr(7), "function");
    if (static_cast<int>(linear.size()) != config.world.dimension) {
      throw ConfigError("linear function needs one coefficient per dimension");
    }
  } else if (config.function != "gp") {
    throw ConfigError("unknown function '" + config.function + "'");
  }

  LabReport report;
  report.config = config;
  report.runs.resize(static_cast<std::size_t>(config.runs));
  parallel_for(report.runs.size(), config.threads, [&](std::size_t r) {
    const std::uint64_t seed = config.seed + r;
    Rng rng(seed);
    SampledFunction f;
    if (linear.empty()) {
      f = sample_gp_function(config.world, rng);
    } else {
      f = tabulate(config.world, [&](const Eigen::VectorXd& x) {
        return Eigen::Map<const Eigen::VectorXd>(linear.data(), x.size()).dot(x);
      });
    }
    const auto alpha = estimate_alpha_star(f, config.world);
    const auto trace = gp_ucb_vs_run(config.world, f, policy, config.horizon, config.params, rng);
    report.runs[r] = {seed,
                      bound_check(trace, config.params, alpha.alpha_l, alpha.alpha_max_l,
                                  config.world.upper),
                      alpha.alpha_l};
  });
  return report;
}

std::string to_json(const LabReport& report) {
  using nlohmann::json;
  const auto& c = report.config;
  json runs = json::array();
  for (const auto& run : report.runs) {
    const auto& b = run.report;
    runs.push_back({
        {"seed", run.seed},
        {"check_i", b.holds},
        {"check_i_without_selection_term", b.holds_without_selection},
        {"check_ii", b.closed_form_holds},
        {"cumulative_regret", b.cumulative_regret},
        {"ucb_term", b.ucb_term},
        {"discretization_term", b.discretization_term},
        {"selection_term", b.selection_term},
        {"bound_i", b.bound},
        {"bound_ii", b.closed_form_bound},
        {"beta_star", b.beta_star},
        {"info_gain_surrogate", b.info_gain_surrogate},
        {"alpha_l", std::vector<double>(run.alpha_l.data(), run.alpha_l.data() + run.alpha_l.size())},
    });
  }
  const double n = static_cast<double>(report.runs.size());
  int closed_form = 0;
  for (const auto& run : report.runs) closed_form += run.report.closed_form_holds ? 1 : 0;
  json doc = {
      {"config",
       {{"dimension", c.world.dimension},
        {"resolution", c.world.resolution},
        {"upper", c.world.upper},
        {"signal_variance", c.world.kernel.signal_variance},
        {"length_scale", c.world.kernel.length_scale},
        {"noise_variance", c.params.noise_variance},
        {"delta", c.params.delta},
        {"a", c.params.a},
        {"b", c.params.b},
        {"horizon", c.horizon},
        {"runs", c.runs},
        {"seed", c.seed},
        {"policy", c.policy},
        {"function", c.function}}},
      {"summary",
       {{"check_i_pass", report.holds_count()},
        {"check_i_fraction", report.holds_count() / n},
        {"check_i_without_selection_term_pass", report.holds_without_selection_count()},
        {"check_i_without_selection_term_fraction", report.holds_without_selection_count() / n},
        {"check_ii_pass", closed_form},
        {"check_ii_fraction", closed_form / n}}},
      {"runs", runs},
  };
  return doc.dump(2) + "\n";
}

}  // namespace mctsvs::regret
