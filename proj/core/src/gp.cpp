#include "mctsvs/gp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "mctsvs/errors.hpp"

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace mctsvs::gp {

namespace {

// Kernel entries of distant points underflow into subnormals, which makes
// the dense algebra orders of magnitude slower. Flush them to zero for the
// lifetime of the guard.
class FlushSubnormals {
 public:
#if defined(__SSE2__)
  FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushSubnormals() { _mm_setcsr(saved_); }
 private:
  unsigned saved_;
#endif
 public:
  FlushSubnormals(const FlushSubnormals&) = delete;
  FlushSubnormals& operator=(const FlushSubnormals&) = delete;
};

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

struct Standardization {
  double offset = 0.0;
  double scale = 1.0;
};

Standardization standardization_of(const Eigen::VectorXd& y) {
  Standardization s;
  if (y.size() == 0) return s;
  s.offset = y.mean();
  const double var = (y.array() - s.offset).square().mean();
  const double sd = std::sqrt(var);
  s.scale = (sd > 1e-12 * std::max(1.0, std::abs(s.offset))) ? sd : 1.0;
  return s;
}

void validate_training_set(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.cols() != y.size()) {
    throw ArgumentError("GP training inputs and targets differ in count");
  }
  if (!y.allFinite()) throw DataError("GP targets must be finite");
  if (!x.allFinite()) throw DataError("GP inputs must be finite");
}

// Lower triangle of (L L^T)^{-1} from the lower Cholesky factor L. Both
// passes work on column/row blocks so the zero structure of L^{-1} is
// never multiplied through.
void inverse_from_cholesky(const Eigen::MatrixXd& l, Eigen::MatrixXd& inv_l, Eigen::MatrixXd& out) {
  constexpr Eigen::Index kBlock = 64;
  const Eigen::Index n = l.rows();
  inv_l.setZero(n, n);
  for (Eigen::Index j0 = 0; j0 < n; j0 += kBlock) {
    const Eigen::Index b = std::min(kBlock, n - j0);
    const Eigen::Index m = n - j0;
    auto x = inv_l.block(j0, j0, m, b);
    x.topRows(b).setIdentity();
    l.bottomRightCorner(m, m).triangularView<Eigen::Lower>().solveInPlace(x);
  }
  out.setZero(n, n);
  for (Eigen::Index k0 = 0; k0 < n; k0 += kBlock) {
    const Eigen::Index b = std::min(kBlock, n - k0);
    const Eigen::Index end = k0 + b;
    out.topLeftCorner(end, end).selfadjointView<Eigen::Lower>().rankUpdate(
        inv_l.block(k0, 0, b, end).transpose());
  }
}

// One LML evaluation on a precomputed squared-distance matrix. The factor
// is kept so the gradient can be added for accepted line-search points.
class LmlEvaluator {
 public:
  LmlEvaluator(const Eigen::MatrixXd& d2, const Eigen::VectorXd& y) : d2_(d2), y_(y) {}

  // Returns the LML, or -inf when the covariance is not positive definite.
  double value(const KernelParams& p) {
    params_ = p;
    const auto n = static_cast<double>(y_.size());
    inv_two_l2_ = 1.0 / (2.0 * p.length_scale * p.length_scale);
    kf_ = (d2_.array() * -inv_two_l2_).exp() * p.signal_variance;
    factor_ = kf_;
    factor_.diagonal().array() += p.noise_variance;
    llt_.compute(factor_);
    if (llt_.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
    alpha_ = llt_.solve(y_);
    const double log_det_half = llt_.matrixLLT().diagonal().array().log().sum();
    const double v = -0.5 * y_.dot(alpha_) - log_det_half - 0.5 * n * kLogTwoPi;
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  }

  // Gradient w.r.t. (log l, log sf2, log eta2) at the last value() point:
  // 1/2 tr((alpha alpha^T - K^{-1}) dK/dtheta).
  Eigen::Vector3d gradient() {
    const Eigen::Index n = y_.size();
    inverse_from_cholesky(llt_.matrixLLT(), factor_, inverse_);  // lower triangle of K^{-1}
    double g_sf = 0.0;
    double g_ls = 0.0;
    double tr_w = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double wjj = alpha_[j] * alpha_[j] - inverse_(j, j);
      tr_w += wjj;
      g_sf += wjj * kf_(j, j);
      double col_sf = 0.0;
      double col_ls = 0.0;
      for (Eigen::Index i = j + 1; i < n; ++i) {
        const double wk = (alpha_[i] * alpha_[j] - inverse_(i, j)) * kf_(i, j);
        col_sf += wk;
        col_ls += wk * d2_(i, j);
      }
      g_sf += 2.0 * col_sf;
      g_ls += 2.0 * col_ls;
    }
    Eigen::Vector3d g;
    g[0] = 0.5 * g_ls * 2.0 * inv_two_l2_;  // d kf / d log l = kf * d2 / l^2
    g[1] = 0.5 * g_sf;
    g[2] = 0.5 * params_.noise_variance * tr_w;
    return g;
  }

 private:
  const Eigen::MatrixXd& d2_;
  const Eigen::VectorXd& y_;
  KernelParams params_;
  double inv_two_l2_ = 0.0;
  Eigen::MatrixXd kf_;
  Eigen::MatrixXd factor_;
  Eigen::MatrixXd inverse_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

LmlResult lml_from_distances(const Eigen::MatrixXd& d2, const Eigen::VectorXd& y,
                             const KernelParams& p) {
  LmlResult out;
  const FlushSubnormals ftz;
  LmlEvaluator eval(d2, y);
  out.value = eval.value(p);
  if (!std::isfinite(out.value)) return out;
  out.ok = true;
  out.gradient = eval.gradient();
  return out;
}

// Maps between the hyperparameter box (log space) and R^3 via a logistic.
struct BoxTransform {
  std::array<double, 3> lo;
  std::array<double, 3> hi;

  explicit BoxTransform(const HyperBounds& b)
      : lo{std::log(b.length_scale_min), std::log(b.signal_variance_min),
           std::log(b.noise_variance_min)},
        hi{std::log(b.length_scale_max), std::log(b.signal_variance_max),
           std::log(b.noise_variance_max)} {}

  [[nodiscard]] KernelParams params(const Eigen::Vector3d& z) const {
    const Eigen::Vector3d t = log_params(z);
    return {std::exp(t[1]), std::exp(t[0]), std::exp(t[2])};
  }

  [[nodiscard]] Eigen::Vector3d log_params(const Eigen::Vector3d& z) const {
    Eigen::Vector3d t;
    for (int k = 0; k < 3; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      t[k] = lo[ku] + (hi[ku] - lo[ku]) / (1.0 + std::exp(-z[k]));
    }
    return t;
  }

  [[nodiscard]] Eigen::Vector3d jacobian(const Eigen::Vector3d& z) const {
    Eigen::Vector3d j;
    for (int k = 0; k < 3; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const double s = 1.0 / (1.0 + std::exp(-z[k]));
      j[k] = (hi[ku] - lo[ku]) * s * (1.0 - s);
    }
    return j;
  }

  [[nodiscard]] Eigen::Vector3d unconstrained(const KernelParams& p) const {
    const std::array<double, 3> t = {std::log(p.length_scale), std::log(p.signal_variance),
                                     std::log(p.noise_variance)};
    Eigen::Vector3d z;
    for (std::size_t k = 0; k < 3; ++k) {
      double u = (t[k] - lo[k]) / (hi[k] - lo[k]);
      u = std::clamp(u, 1e-6, 1.0 - 1e-6);
      z[static_cast<Eigen::Index>(k)] = std::log(u / (1.0 - u));
    }
    return z;
  }
};

struct StartResult {
  Eigen::Vector3d z;
  double value = -std::numeric_limits<double>::infinity();
};

// BFGS ascent on the unconstrained coordinates with Armijo backtracking.
StartResult maximize_from(const Eigen::MatrixXd& d2, const Eigen::VectorXd& y,
                          const BoxTransform& box, Eigen::Vector3d z, const FitOptions& opt,
                          int& evaluations) {
  const FlushSubnormals ftz;
  LmlEvaluator lml(d2, y);
  auto value_at = [&](const Eigen::Vector3d& at) {
    ++evaluations;
    return lml.value(box.params(at));
  };
  auto gradient_at = [&](const Eigen::Vector3d& at) {
    return Eigen::Vector3d(lml.gradient().cwiseProduct(box.jacobian(at)));
  };

  StartResult best;
  double f = value_at(z);
  if (!std::isfinite(f)) {
    best.z = z;
    return best;
  }
  Eigen::Vector3d g = gradient_at(z);
  Eigen::Matrix3d h = Eigen::Matrix3d::Identity();  // inverse Hessian of -f
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() < opt.gradient_tolerance) break;
    Eigen::Vector3d dir = h * g;
    if (dir.dot(g) <= 0.0) {
      h.setIdentity();
      dir = g;
    }
    // Keep steps bounded in the logistic coordinates.
    const double max_step = dir.lpNorm<Eigen::Infinity>();
    if (max_step > 5.0) dir *= 5.0 / max_step;

    double step = 1.0;
    Eigen::Vector3d z_new;
    double f_new = -std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      z_new = z + step * dir;
      f_new = value_at(z_new);
      if (std::isfinite(f_new) && f_new >= f + 1e-4 * step * g.dot(dir)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const Eigen::Vector3d g_new = gradient_at(z_new);

    const Eigen::Vector3d s = z_new - z;
    const Eigen::Vector3d yk = g - g_new;  // gradient change of -f
    const double sy = s.dot(yk);
    const double improvement = f_new - f;
    z = z_new;
    f = f_new;
    g = g_new;
    if (sy > 1e-12) {
      const double rho = 1.0 / sy;
      const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
      h = (id - rho * s * yk.transpose()) * h * (id - rho * yk * s.transpose()) +
          rho * s * s.transpose();
    }
    if (improvement < opt.value_tolerance) break;
  }
  best.z = z;
  best.value = f;
  return best;
}

}  // namespace

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::VectorXd na = a.colwise().squaredNorm().transpose();
  const Eigen::RowVectorXd nb = b.colwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * (a.transpose() * b);
  d2.colwise() += na;
  d2.rowwise() += nb;
  return d2.cwiseMax(0.0);
}

LmlResult log_marginal_likelihood_with_gradient(const Eigen::MatrixXd& x,
                                                const Eigen::VectorXd& y,
                                                const KernelParams& params) {
  validate_training_set(x, y);
  Eigen::MatrixXd d2 = squared_distances(x, x);
  d2.diagonal().setZero();
  return lml_from_distances(d2, y, params);
}

GPModel::GPModel(int dimension, KernelParams params) : dimension_(dimension), params_(params) {
  if (dimension < 0) throw ArgumentError("GP dimension must be non-negative");
  train_x_.resize(dimension, 0);
}

GPModel GPModel::condition(Eigen::MatrixXd x, const Eigen::VectorXd& y, KernelParams params,
                           bool standardize) {
  validate_training_set(x, y);
  if (params.signal_variance <= 0.0 || params.length_scale <= 0.0 ||
      params.noise_variance <= 0.0) {
    throw ArgumentError("kernel parameters must be strictly positive");
  }
  GPModel m;
  m.dimension_ = static_cast<int>(x.rows());
  m.params_ = params;
  if (standardize) {
    const Standardization s = standardization_of(y);
    m.y_offset_ = s.offset;
    m.y_scale_ = s.scale;
  }
  m.train_y_ = (y.array() - m.y_offset_) / m.y_scale_;
  m.train_x_ = std::move(x);
  m.factorize();
  return m;
}

void GPModel::factorize() {
  const FlushSubnormals ftz;
  const Eigen::Index n = train_x_.cols();
  if (n == 0) {
    alpha_.resize(0);
    return;
  }
  Eigen::MatrixXd d2 = squared_distances(train_x_, train_x_);
  d2.diagonal().setZero();
  const double inv_two_l2 = 1.0 / (2.0 * params_.length_scale * params_.length_scale);
  Eigen::MatrixXd k = (d2.array() * -inv_two_l2).exp() * params_.signal_variance;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Eigen::MatrixXd kn = k;
    kn.diagonal().array() += params_.noise_variance;
    llt_.compute(kn);
    if (llt_.info() == Eigen::Success) {
      alpha_ = llt_.solve(train_y_);
      return;
    }
    params_.noise_variance = std::max(params_.noise_variance * 10.0, kNoiseFloor);
  }
  throw DataError("GP covariance is not positive definite even with added jitter");
}

GPModel GPModel::fit(Eigen::MatrixXd x, const Eigen::VectorXd& y, Rng& rng,
                     const FitOptions& options, std::optional<KernelParams> warm_start,
                     FitReport* report) {
  if (x.cols() == 0) throw ArgumentError("GP fit requires at least one point");
  validate_training_set(x, y);

  Standardization s;
  if (options.standardize) s = standardization_of(y);
  const Eigen::VectorXd ys = (y.array() - s.offset) / s.scale;

  Eigen::MatrixXd d2 = squared_distances(x, x);
  d2.diagonal().setZero();

  const BoxTransform box(options.bounds);
  std::vector<Eigen::Vector3d> starts;
  if (warm_start) starts.push_back(box.unconstrained(*warm_start));
  for (int r = 0; r < options.restarts; ++r) {
    Eigen::Vector3d z;
    for (int k = 0; k < 3; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const double t = uniform(rng, box.lo[ku], box.hi[ku]);
      const double u = std::clamp((t - box.lo[ku]) / (box.hi[ku] - box.lo[ku]), 1e-6, 1 - 1e-6);
      z[k] = std::log(u / (1.0 - u));
    }
    starts.push_back(z);
  }
  if (starts.empty()) starts.push_back(box.unconstrained(KernelParams{}));

  int evaluations = 0;
  std::size_t best = 0;
  std::vector<StartResult> results;
  results.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    results.push_back(maximize_from(d2, ys, box, starts[i], options, evaluations));
    if (results[i].value > results[best].value) best = i;
  }

  KernelParams chosen = box.params(results[best].z);
  if (!std::isfinite(results[best].value)) {
    // Every start failed to factorize: fall back to maximal noise.
    chosen = KernelParams{1.0, 1.0, options.bounds.noise_variance_max};
  }
  if (report) {
    report->start_params.clear();
    report->start_lml.clear();
    for (const auto& r : results) {
      report->start_params.push_back(box.params(r.z));
      report->start_lml.push_back(r.value);
    }
    report->chosen = best;
    report->lml_evaluations = evaluations;
  }

  GPModel m;
  m.dimension_ = static_cast<int>(x.rows());
  m.params_ = chosen;
  m.y_offset_ = s.offset;
  m.y_scale_ = s.scale;
  m.train_y_ = ys;
  m.train_x_ = std::move(x);
  m.factorize();
  return m;
}

Posterior GPModel::posterior(const Eigen::VectorXd& x) const {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
  posterior(Eigen::MatrixXd(x), mean, var);
  return {mean[0], var[0]};
}

void GPModel::posterior(const Eigen::MatrixXd& queries, Eigen::VectorXd& mean,
                        Eigen::VectorXd& variance) const {
  const FlushSubnormals ftz;
  if (queries.rows() != dimension_) {
    throw ArgumentError("GP query dimension " + std::to_string(queries.rows()) +
                        " != model dimension " + std::to_string(dimension_));
  }
  const Eigen::Index m = queries.cols();
  const double scale2 = y_scale_ * y_scale_;
  if (train_x_.cols() == 0) {
    mean = Eigen::VectorXd::Constant(m, y_offset_);
    variance = Eigen::VectorXd::Constant(m, params_.signal_variance * scale2);
    return;
  }
  const double inv_two_l2 = 1.0 / (2.0 * params_.length_scale * params_.length_scale);
  Eigen::MatrixXd ks =
      (squared_distances(train_x_, queries).array() * -inv_two_l2).exp() * params_.signal_variance;
  mean = (ks.transpose() * alpha_).array() * y_scale_ + y_offset_;
  llt_.matrixL().solveInPlace(ks);
  variance = ((params_.signal_variance - ks.colwise().squaredNorm().array()).max(0.0) * scale2)
                 .matrix()
                 .transpose();
}

double GPModel::log_marginal_likelihood() const {
  const Eigen::Index n = train_x_.cols();
  if (n == 0) return 0.0;
  const double log_det_half = llt_.matrixLLT().diagonal().array().log().sum();
  return -0.5 * train_y_.dot(alpha_) - log_det_half - 0.5 * static_cast<double>(n) * kLogTwoPi;
}

}  // namespace mctsvs::gp
