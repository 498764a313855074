// Apache License, Version 2.0, refer to LICENSE.txt

#include "simplex_priors/mle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "simplex_priors/errors.hpp"
#include "simplex_priors/special_functions.hpp"

namespace spx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative size of a predicted gain the objective can still resolve.
constexpr double kObjectiveResolution = 1e-12;

// Score scan for sigma: sigma + 1 runs geometrically over [1e-9, 1e6 + 1],
// extended up to 1e15 while the score is still positive at the end.
constexpr double kScanStart = 1e-9;
constexpr double kScanEnd = 1e6 + 1.0;
constexpr double kScanExtendedEnd = 1e15;
constexpr int kScanPointsPerDecade = 40;

// The alpha-dependent penalty -ln(1 + sigma E_alpha[H]) in the selection
// likelihood, or -ln E_alpha[H] in the sigma -> inf limit.
struct Penalty {
  enum class Kind { none, finite, infinite };
  Kind kind = Kind::none;
  double sigma = 0.0;

  static Penalty from(const SigmaEstimate& s) {
    if (s.kind == SigmaKind::plus_infinity) return {Kind::infinite, 0.0};
    if (s.value == 0.0) return {Kind::none, 0.0};
    return {Kind::finite, s.value};
  }
};

// E_alpha[H] = Q / D with Q = sum a_i (a_i + 1), D = S (S + 1), and its
// first and second partial derivatives.
struct HomozygosityDerivatives {
  double value;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

HomozygosityDerivatives homozygosity_derivatives(const std::vector<double>& a) {
  const auto m = static_cast<Eigen::Index>(a.size());
  double s = 0.0;
  double q = 0.0;
  for (double v : a) {
    s += v;
    q += v * (v + 1.0);
  }
  const double d = s * (s + 1.0);
  const double e = q / d;
  const double dd = 2.0 * s + 1.0;
  HomozygosityDerivatives out{e, Eigen::VectorXd(m), Eigen::MatrixXd(m, m)};
  for (Eigen::Index i = 0; i < m; ++i) out.gradient(i) = (2.0 * a[i] + 1.0 - e * dd) / d;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double qij = (i == j) ? 2.0 : 0.0;
      out.hessian(i, j) = (qij - out.gradient(j) * dd - 2.0 * e - out.gradient(i) * dd) / d;
    }
  }
  return out;
}

double penalty_value(const Penalty& pen, double e) {
  switch (pen.kind) {
    case Penalty::Kind::none:
      return 0.0;
    case Penalty::Kind::finite:
      return std::log1p(pen.sigma * e);
    case Penalty::Kind::infinite:
      return std::log(e);
  }
  return 0.0;
}

// d/de of penalty_value.
double penalty_slope(const Penalty& pen, double e) {
  switch (pen.kind) {
    case Penalty::Kind::none:
      return 0.0;
    case Penalty::Kind::finite:
      return pen.sigma / (1.0 + pen.sigma * e);
    case Penalty::Kind::infinite:
      return 1.0 / e;
  }
  return 0.0;
}

double expected_h(const std::vector<double>& a) {
  double s = 0.0;
  double q = 0.0;
  for (double v : a) {
    s += v;
    q += v * (v + 1.0);
  }
  return q / (s * (s + 1.0));
}

// Per-observation alpha objective: ln Γ(S) - sum ln Γ(a_i) + sum (a_i - 1) mean_log_i - penalty.
double alpha_objective(const std::vector<double>& a, const std::vector<double>& mean_log, const Penalty& pen) {
  double s = 0.0;
  double value = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i];
    value += (a[i] - 1.0) * mean_log[i] - log_gamma(a[i]);
  }
  return value + log_gamma(s) - penalty_value(pen, expected_h(a));
}

Eigen::VectorXd alpha_gradient(const std::vector<double>& a, const std::vector<double>& mean_log,
                               const Penalty& pen) {
  const auto m = static_cast<Eigen::Index>(a.size());
  double s = 0.0;
  for (double v : a) s += v;
  const double psi_total = digamma(s);
  Eigen::VectorXd g(m);
  for (Eigen::Index i = 0; i < m; ++i) g(i) = psi_total - digamma(a[i]) + mean_log[i];
  if (pen.kind != Penalty::Kind::none) {
    const auto h = homozygosity_derivatives(a);
    g -= penalty_slope(pen, h.value) * h.gradient;
  }
  return g;
}

// Newton direction (ascent) at a. Without penalty the Hessian is
// diag(-trigamma(a_i)) + trigamma(S) 11^T and is inverted in O(m).
Eigen::VectorXd newton_direction(const std::vector<double>& a, const Eigen::VectorXd& g, const Penalty& pen) {
  const auto m = static_cast<Eigen::Index>(a.size());
  double s = 0.0;
  for (double v : a) s += v;
  const double z = trigamma(s);

  if (pen.kind == Penalty::Kind::none) {
    Eigen::VectorXd q(m);
    for (Eigen::Index i = 0; i < m; ++i) q(i) = -trigamma(a[i]);
    double num = 0.0;
    double den = 1.0 / z;
    for (Eigen::Index i = 0; i < m; ++i) {
      num += g(i) / q(i);
      den += 1.0 / q(i);
    }
    const double b = num / den;
    Eigen::VectorXd step(m);
    for (Eigen::Index i = 0; i < m; ++i) step(i) = -(g(i) - b) / q(i);
    return step;
  }

  Eigen::MatrixXd hess = Eigen::MatrixXd::Constant(m, m, z);
  for (Eigen::Index i = 0; i < m; ++i) hess(i, i) -= trigamma(a[i]);
  const auto h = homozygosity_derivatives(a);
  const double w = penalty_slope(pen, h.value);
  hess -= w * h.hessian - w * w * h.gradient * h.gradient.transpose();

  Eigen::VectorXd step = -hess.fullPivLu().solve(g);
  if (!step.allFinite() || step.dot(g) <= 0.0) {
    // Not a local concave region: scaled gradient ascent instead.
    for (Eigen::Index i = 0; i < m; ++i) step(i) = g(i) / std::max(std::abs(hess(i, i)), 1e-12);
  }
  return step;
}

struct AlphaResult {
  std::vector<double> alpha;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool degenerate = false;
};

AlphaResult maximize_alpha(const std::vector<double>& mean_log, const Penalty& pen, std::vector<double> a,
                           double tol, int max_iter) {
  AlphaResult out;
  double value = alpha_objective(a, mean_log, pen);
  for (int it = 0;; ++it) {
    const Eigen::VectorXd g = alpha_gradient(a, mean_log, pen);
    const double gnorm = g.cwiseAbs().maxCoeff();
    out.iterations = it;
    out.gradient_norm = gnorm;
    if (gnorm < tol) break;
    if (it >= max_iter) {
      throw ConvergenceError("alpha maximum likelihood did not converge after " + std::to_string(max_iter) +
                                 " iterations (gradient max-norm " + std::to_string(gnorm) + ")",
                             a, gnorm, it);
    }

    const Eigen::VectorXd dir = newton_direction(a, g, pen);
    // Below the objective's rounding noise the line search cannot tell steps
    // apart, so the full Newton step is taken on the quadratic model alone.
    const bool within_noise = g.dot(dir) <= kObjectiveResolution * std::max(1.0, std::abs(value));
    std::vector<double> trial(a.size());
    double step = 1.0;
    bool accepted = false;
    bool hit_upper = false;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      hit_upper = false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        trial[i] = std::clamp(a[i] + step * dir(static_cast<Eigen::Index>(i)), kAlphaLowerClamp, kAlphaUpperClamp);
        hit_upper = hit_upper || trial[i] >= kAlphaUpperClamp;
      }
      const double trial_value = alpha_objective(trial, mean_log, pen);
      if (within_noise || trial_value >= value - 4.0 * DBL_EPSILON * std::max(1.0, std::abs(value))) {
        accepted = true;
        value = std::max(value, trial_value);
        break;
      }
    }
    if (!accepted) {
      throw ConvergenceError("alpha maximum likelihood: line search failed (gradient max-norm " +
                                 std::to_string(gnorm) + ")",
                             a, gnorm, it);
    }
    a = trial;
    if (hit_upper) {
      out.degenerate = true;
      out.iterations = it + 1;
      out.gradient_norm = alpha_gradient(a, mean_log, pen).cwiseAbs().maxCoeff();
      break;
    }
  }
  out.alpha = std::move(a);
  return out;
}

struct SampleShape {
  std::size_t constant_coordinates = 0;
};

SampleShape inspect(const FrequencySample& sample) {
  SampleShape shape;
  const std::size_t m = sample.dimension();
  for (std::size_t i = 0; i < m; ++i) {
    double lo = kInf;
    double hi = -kInf;
    for (const auto& p : sample.points()) {
      lo = std::min(lo, p[i]);
      hi = std::max(hi, p[i]);
    }
    if (hi - lo <= 8.0 * DBL_EPSILON * std::max(hi, 1e-300)) ++shape.constant_coordinates;
  }
  return shape;
}

std::vector<double> initial_alpha(const FrequencySample& sample) {
  const std::size_t m = sample.dimension();
  const double n = static_cast<double>(sample.size());
  std::vector<double> mean(m, 0.0);
  std::vector<double> second(m, 0.0);
  double smallest = kInf;
  for (const auto& p : sample.points()) {
    for (std::size_t i = 0; i < m; ++i) {
      mean[i] += p[i] / n;
      second[i] += p[i] * p[i] / n;
      smallest = std::min(smallest, p[i]);
    }
  }
  std::vector<double> precision;
  for (std::size_t i = 0; i < m; ++i) {
    const double var = second[i] - mean[i] * mean[i];
    const double s = (mean[i] - second[i]) / var;
    if (var > 0.0 && std::isfinite(s) && s > 0.0) precision.push_back(s);
  }
  std::vector<double> alpha(m);
  if (!precision.empty()) {
    std::nth_element(precision.begin(), precision.begin() + static_cast<long>(precision.size() / 2),
                     precision.end());
    const double s = precision[precision.size() / 2];
    bool admissible = true;
    for (std::size_t i = 0; i < m; ++i) {
      alpha[i] = std::clamp(s * mean[i], kAlphaLowerClamp, kAlphaUpperClamp);
      admissible = admissible && alpha[i] > kAlphaLowerClamp && alpha[i] < kAlphaUpperClamp;
    }
    if (admissible) return alpha;
  }
  // Every parameter equal to the smallest observed proportion.
  std::fill(alpha.begin(), alpha.end(), std::max(smallest, kAlphaLowerClamp));
  return alpha;
}

void require_fit_sample(const FrequencySample& sample) {
  if (sample.size() < 2) throw DataError("maximum likelihood needs at least 2 observations");
  if (!sample.all_interior()) throw DataError("maximum likelihood needs interior observations (all p_i > 0)");
}

DirichletFit fit_alpha(const FrequencySample& sample, const Penalty& pen, double tol, int max_iter) {
  require_fit_sample(sample);
  if (!(tol > 0.0)) throw DomainError("maximum likelihood: tol must be > 0");
  const std::size_t m = sample.dimension();
  const auto shape = inspect(sample);
  const auto mean_log = sample.mean_log();

  if (shape.constant_coordinates == m) {
    // Identical observations: the likelihood grows without bound along alpha ∝ p.
    const auto& p = sample.points().front();
    const double top = *std::max_element(p.values().begin(), p.values().end());
    std::vector<double> alpha(m);
    for (std::size_t i = 0; i < m; ++i) alpha[i] = std::max(kAlphaUpperClamp * p[i] / top, kAlphaLowerClamp);
    DirichletParams params(alpha);
    return {params, 0, alpha_gradient(alpha, mean_log, pen).cwiseAbs().maxCoeff(),
            dirichlet_log_likelihood(sample, params), true};
  }
  if (shape.constant_coordinates > 0) {
    throw DataError("degenerate sample: " + std::to_string(shape.constant_coordinates) +
                    " coordinate(s) are constant across all observations");
  }

  const auto result = maximize_alpha(mean_log, pen, initial_alpha(sample), tol, max_iter);
  DirichletParams params(result.alpha);
  return {params, result.iterations, result.gradient_norm, dirichlet_log_likelihood(sample, params),
          result.degenerate};
}

}  // namespace

FrequencySample::FrequencySample(std::vector<SimplexPoint> points) : FrequencySample(std::move(points), true) {}

FrequencySample FrequencySample::allowing_boundary(std::vector<SimplexPoint> points) {
  return FrequencySample(std::move(points), false);
}

FrequencySample::FrequencySample(std::vector<SimplexPoint> points, bool require_interior)
    : points_(std::move(points)) {
  if (points_.empty()) throw DataError("frequency sample is empty");
  const std::size_t m = points_.front().dimension();
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (points_[k].dimension() != m) {
      throw DataError("observation " + std::to_string(k + 1) + " has dimension " +
                          std::to_string(points_[k].dimension()) + ", expected " + std::to_string(m),
                      k + 1);
    }
    const bool interior = points_[k].interior();
    if (require_interior && !interior) {
      throw DataError("observation " + std::to_string(k + 1) + " lies on the simplex boundary", k + 1);
    }
    all_interior_ = all_interior_ && interior;
    homozygosity_.push_back(points_[k].homozygosity());
  }
}

std::vector<double> FrequencySample::mean_log() const {
  if (!all_interior_) throw DomainError("mean_log: sample has boundary observations");
  const std::size_t m = dimension();
  std::vector<double> out(m, 0.0);
  for (const auto& p : points_) {
    for (std::size_t i = 0; i < m; ++i) out[i] += std::log(p[i]);
  }
  for (double& v : out) v /= static_cast<double>(points_.size());
  return out;
}

SigmaEstimate SigmaEstimate::interior(double v) {
  if (!std::isfinite(v) || v <= -1.0) throw DomainError("interior sigma must be finite and > -1");
  return {SigmaKind::interior, v};
}

const char* to_string(SigmaKind kind) {
  switch (kind) {
    case SigmaKind::interior:
      return "interior";
    case SigmaKind::lower_boundary:
      return "lower_boundary";
    case SigmaKind::plus_infinity:
      return "plus_infinity";
  }
  return "unknown";
}

DirichletFit dirichlet_mle(const FrequencySample& sample, double tol, int max_iter) {
  return fit_alpha(sample, Penalty{}, tol, max_iter);
}

double dirichlet_log_likelihood(const FrequencySample& sample, const DirichletParams& params) {
  require_same_dimension(sample.dimension(), params.dimension(), "dirichlet_log_likelihood");
  double total = 0.0;
  for (const auto& p : sample.points()) total += dirichlet_log_density(params, p);
  return total;
}

double selection_log_likelihood(const FrequencySample& sample, const DirichletParams& params, double sigma) {
  if (!(sigma >= -1.0) || std::isnan(sigma)) throw DomainError("selection_log_likelihood: sigma must be >= -1");
  if (std::isinf(sigma)) return selection_log_likelihood_limit(sample, params);
  const double e = expected_homozygosity(params);
  double total = dirichlet_log_likelihood(sample, params);
  if (sigma == 0.0) return total;
  for (double h : sample.homozygosities()) {
    const double g = 1.0 + sigma * h;
    if (g <= 0.0) return -kInf;
    total += std::log1p(sigma * h);
  }
  return total - static_cast<double>(sample.size()) * std::log1p(sigma * e);
}

double selection_log_likelihood_limit(const FrequencySample& sample, const DirichletParams& params) {
  const double e = expected_homozygosity(params);
  double total = dirichlet_log_likelihood(sample, params);
  for (double h : sample.homozygosities()) total += std::log(h / e);
  return total;
}

double selection_log_likelihood(const FrequencySample& sample, const DirichletParams& params,
                                const SigmaEstimate& sigma) {
  if (sigma.kind == SigmaKind::plus_infinity) return selection_log_likelihood_limit(sample, params);
  return selection_log_likelihood(sample, params, sigma.value);
}

namespace {

// sum_j h_j / (1 + s h_j) - n e / (1 + s e), written termwise as
// (h_j - e) / ((1 + s h_j)(1 + s e)) so large s does not cancel to zero.
double homozygosity_score(std::span<const double> hs, double e, double sigma) {
  const double ge = 1.0 + sigma * e;
  double total = 0.0;
  for (double h : hs) total += (h - e) / ((1.0 + sigma * h) * ge);
  return total;
}

}  // namespace

double sigma_score(const FrequencySample& sample, const DirichletParams& params, double sigma) {
  if (!(sigma >= -1.0) || !std::isfinite(sigma)) throw DomainError("sigma_score: sigma must be finite and >= -1");
  require_same_dimension(sample.dimension(), params.dimension(), "sigma_score");
  return homozygosity_score(sample.homozygosities(), expected_homozygosity(params), sigma);
}

SigmaEstimate sigma_mle(const FrequencySample& sample, const DirichletParams& params) {
  require_same_dimension(sample.dimension(), params.dimension(), "sigma_mle");
  const auto hs = sample.homozygosities();
  const double n = static_cast<double>(sample.size());
  const double e = expected_homozygosity(params);

  // Only the sigma-dependent part; the Dirichlet term is common to all candidates.
  auto profile = [&](double sigma) {
    double total = 0.0;
    for (double h : hs) {
      const double g = 1.0 + sigma * h;
      if (g <= 0.0) return -kInf;
      total += std::log1p(sigma * h);
    }
    return total - n * std::log1p(sigma * e);
  };
  auto score = [&](double sigma) { return homozygosity_score(hs, e, sigma); };
  double limit = 0.0;
  for (double h : hs) limit += std::log(h / e);

  SigmaEstimate best = SigmaEstimate::lower_boundary();
  double best_value = profile(-1.0);

  const double ratio = std::pow(10.0, 1.0 / kScanPointsPerDecade);
  double prev_x = kScanStart;
  double prev_score = score(-1.0 + prev_x);
  for (double x = kScanStart * ratio;; x *= ratio) {
    const double cur_score = score(-1.0 + x);
    if (prev_score > 0.0 && cur_score <= 0.0) {
      // Local maximum in (prev_x, x]: bisect on the score.
      double lo = -1.0 + prev_x;
      double hi = -1.0 + x;
      for (int it = 0; it < 200 && hi - lo > 1e-10 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (score(mid) > 0.0 ? lo : hi) = mid;
      }
      const double root = 0.5 * (lo + hi);
      const double value = profile(root);
      if (root > -1.0 && value > best_value) {
        best = SigmaEstimate::interior(root);
        best_value = value;
      }
    }
    prev_x = x;
    prev_score = cur_score;
    if (x >= kScanEnd && (cur_score <= 0.0 || x >= kScanExtendedEnd)) break;
  }
  if (limit > best_value) return SigmaEstimate::plus_infinity();
  return best;
}

SelectionFit selection_mle_fixed_sigma(const FrequencySample& sample, const SigmaEstimate& sigma, double tol,
                                       int max_iter) {
  const auto fit = fit_alpha(sample, Penalty::from(sigma), tol, max_iter);
  SelectionFit out{fit.alpha, sigma, 0.0, 0, 0.0, false, {}};
  out.log_likelihood = selection_log_likelihood(sample, fit.alpha, sigma);
  out.iterations = fit.iterations;
  out.gradient_norm = fit.gradient_norm;
  out.degenerate_concentration = fit.degenerate_concentration;
  out.objective_trace.push_back(out.log_likelihood);
  return out;
}

SelectionFit selection_mle_joint(const FrequencySample& sample, double tol, int max_iter) {
  require_fit_sample(sample);
  const auto start = dirichlet_mle(sample, std::min(tol, 1e-10), 200);
  std::vector<double> alpha(start.alpha.values().begin(), start.alpha.values().end());
  SigmaEstimate sigma = sigma_mle(sample, start.alpha);
  double objective = selection_log_likelihood(sample, start.alpha, sigma);

  SelectionFit out{start.alpha, sigma, 0.0, 0, 0.0, false, {}};
  out.objective_trace.push_back(objective);
  out.degenerate_concentration = start.degenerate_concentration;
  if (start.degenerate_concentration) {
    out.log_likelihood = objective;
    out.gradient_norm = start.gradient_norm;
    return out;
  }

  const auto mean_log = sample.mean_log();
  for (int it = 1;; ++it) {
    if (it > max_iter) {
      throw ConvergenceError("joint selection fit did not converge after " + std::to_string(max_iter) +
                                 " iterations",
                             alpha, out.gradient_norm, max_iter);
    }
    const auto inner = maximize_alpha(mean_log, Penalty::from(sigma), alpha, std::min(tol, 1e-10), 200);
    DirichletParams params(inner.alpha);
    const SigmaEstimate next_sigma = sigma_mle(sample, params);
    const double next_objective = selection_log_likelihood(sample, params, next_sigma);
    const bool sigma_settled =
        next_sigma.kind == sigma.kind &&
        (next_sigma.kind != SigmaKind::interior ||
         std::abs(next_sigma.value - sigma.value) <= std::sqrt(tol) * std::max(1.0, std::abs(sigma.value)));
    const double gain = next_objective - objective;

    alpha = inner.alpha;
    sigma = next_sigma;
    objective = std::max(objective, next_objective);
    out.objective_trace.push_back(next_objective);
    out.iterations = it;
    out.degenerate_concentration = inner.degenerate;
    if (inner.degenerate || (gain < tol && sigma_settled)) break;
  }
  out.alpha = DirichletParams(alpha);
  out.sigma = sigma;
  out.log_likelihood = selection_log_likelihood(sample, out.alpha, sigma);
  out.gradient_norm = alpha_gradient(alpha, mean_log, Penalty::from(sigma)).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace spx
