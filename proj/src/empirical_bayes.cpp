// Apache License, Version 2.0, refer to LICENSE.txt

#include "simplex_priors/empirical_bayes.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "simplex_priors/errors.hpp"
#include "simplex_priors/posterior.hpp"
#include "simplex_priors/special_functions.hpp"

namespace spx {

namespace {

constexpr int kScanPointsPerDecade = 40;
constexpr int kFullAlphaCycles = 200;

struct ScanResult {
  ThetaKind kind;
  double x;
  double value;
};

// Maximizes f over [kThetaMin, kThetaMax]: log-spaced scan, then Brent
// (golden section with parabolic steps) on log x between the neighbours of
// the best scan point. An endpoint is reported as a boundary only when it
// beats every other scan value strictly.
ScanResult maximize_on_log_scale(const std::function<double(double)>& f) {
  const double lo = std::log(kThetaMin);
  const double hi = std::log(kThetaMax);
  const int count = static_cast<int>(std::lround((hi - lo) / std::log(10.0) * kScanPointsPerDecade)) + 1;
  std::vector<double> values(static_cast<std::size_t>(count));
  auto at = [&](int j) { return std::exp(lo + (hi - lo) * j / (count - 1)); };
  for (int j = 0; j < count; ++j) values[static_cast<std::size_t>(j)] = f(at(j));
  int best = 1;
  for (int j = 2; j < count - 1; ++j) {
    if (values[static_cast<std::size_t>(j)] > values[static_cast<std::size_t>(best)]) best = j;
  }
  const double interior_best = values[static_cast<std::size_t>(best)];
  if (values.front() > interior_best && values.front() > values.back()) {
    return {ThetaKind::zero_boundary, kThetaMin, values.front()};
  }
  if (values.back() > interior_best && values.back() > values.front()) {
    return {ThetaKind::infinity, kThetaMax, values.back()};
  }

  const double left = std::log(at(best - 1));
  const double right = std::log(at(best + 1));
  const auto found = boost::math::tools::brent_find_minima([&](double t) { return -f(std::exp(t)); }, left, right,
                                                          std::numeric_limits<double>::digits / 2 + 1);
  double x = std::exp(found.first);
  double value = -found.second;
  if (value < values[static_cast<std::size_t>(best)]) {
    x = at(best);
    value = values[static_cast<std::size_t>(best)];
  }
  return {ThetaKind::interior, x, value};
}

DirichletParams theta_params(double theta, std::size_t m) {
  std::vector<double> alpha(m, 1.0);
  alpha[0] = theta;
  return DirichletParams(std::move(alpha));
}

void require_sigma(double sigma) {
  if (!std::isfinite(sigma) || sigma < -1.0) {
    throw DomainError("sigma must be finite and >= -1, got " + std::to_string(sigma));
  }
}

}  // namespace

double log_marginal_likelihood(const WeightedDirichletModel& model, const CountVector& n) {
  require_same_dimension(model.dimension(), n.dimension(), "marginal_likelihood");
  const auto& params = model.params();
  const auto& g = model.weight();
  const double base = log_dirichlet_moment(params, n);
  if (g.is_identity()) return base;
  return base + log_polynomial_expectation(params + n, g) - log_polynomial_expectation(params, g);
}

double log_marginal_likelihood(const CountVector& n, const DirichletParams& params, double sigma) {
  require_sigma(sigma);
  return log_marginal_likelihood(WeightedDirichletModel::selection(params, sigma), n);
}

double marginal_likelihood(const CountVector& n, const DirichletParams& params, double sigma) {
  return std::exp(log_marginal_likelihood(n, params, sigma));
}

double log_multinomial_coefficient(const CountVector& n) {
  double value = std::lgamma(static_cast<double>(n.total()) + 1.0);
  for (long c : n.values()) value -= std::lgamma(static_cast<double>(c) + 1.0);
  return value;
}

double two_category_marginal_closed_form(double theta, long n1, long n, double sigma) {
  if (!(theta > 0.0) || n1 < 0 || n1 > n) throw DomainError("two_category_marginal: invalid arguments");
  const double t = theta;
  const double k = static_cast<double>(n1);
  const double total = static_cast<double>(n);
  const double log_choose = std::lgamma(total + 1.0) - std::lgamma(k + 1.0);
  if (sigma == 0.0) {
    // n! theta Γ(n1 + theta) / (n1! Γ(n + theta + 1))
    return std::exp(log_choose + std::log(t) + std::lgamma(k + t) - std::lgamma(total + t + 1.0));
  }
  if (sigma == -1.0) {
    // n! (n - n1 + 1)(theta + 1)(theta + 2) Γ(n1 + theta + 1) / (n1! Γ(n + theta + 3))
    return std::exp(log_choose + std::log(total - k + 1.0) + std::log(t + 1.0) + std::log(t + 2.0) +
                    std::lgamma(k + t + 1.0) - std::lgamma(total + t + 3.0));
  }
  throw DomainError("two_category_marginal: closed form only for sigma in {0, -1}");
}

double two_category_bayes_estimate_closed_form(double theta, long n1, long n, double sigma) {
  if (!(theta > 0.0) || n1 < 0 || n1 > n) throw DomainError("two_category_bayes_estimate: invalid arguments");
  const double t = theta;
  const double k = static_cast<double>(n1);
  const double total = static_cast<double>(n);
  if (sigma == 0.0) {
    const double sample_part = total > 0.0 ? (total / (t + 1.0 + total)) * (k / total) : 0.0;
    return sample_part + ((t + 1.0) / (t + 1.0 + total)) * (t / (t + 1.0));
  }
  if (sigma == -1.0) {
    const double upper =
        1.0 - ((t + k + 1.0) * (t + k + 1.0) + (total - k + 1.0) * (total - k + 1.0) + (t + total + 2.0)) /
                  ((t + total + 3.0) * (t + total + 2.0));
    const double lower = 1.0 - ((t + k) * (t + k) + (total - k + 1.0) * (total - k + 1.0) + (t + total + 1.0)) /
                                   ((t + total + 2.0) * (t + total + 1.0));
    return (t + k) / (t + 1.0 + total) * upper / lower;
  }
  throw DomainError("two_category_bayes_estimate: closed form only for sigma in {0, -1}");
}

const char* to_string(ThetaKind kind) {
  switch (kind) {
    case ThetaKind::zero_boundary:
      return "zero_boundary";
    case ThetaKind::interior:
      return "interior";
    case ThetaKind::infinity:
      return "infinity";
  }
  return "unknown";
}

MarginalFit fit_theta(const CountVector& n, double sigma) {
  require_sigma(sigma);
  const std::size_t m = n.dimension();
  if (m < 2) throw DomainError("fit_theta: need at least 2 categories");
  const auto weight = PolynomialWeight::homozygosity_selection(m, sigma);
  const auto r = maximize_on_log_scale([&](double theta) {
    return log_marginal_likelihood(WeightedDirichletModel(theta_params(theta, m), weight), n);
  });
  return {r.kind, r.x, r.value};
}

MarginalFit eb_theta_hat(long n1, long n, double sigma) {
  if (n1 < 0 || n < 0 || n1 > n) {
    throw DomainError("eb_theta_hat: need 0 <= n1 <= n, got n1=" + std::to_string(n1) + ", n=" + std::to_string(n));
  }
  return fit_theta(CountVector({n1, n - n1}), sigma);
}

EbEstimate eb_estimate(const CountVector& n, double sigma, const EbOptions& options) {
  require_sigma(sigma);
  const std::size_t m = n.dimension();
  if (m < 2) throw DomainError("eb_estimate: need at least 2 categories");
  const auto weight = PolynomialWeight::homozygosity_selection(m, sigma);

  if (options.full_alpha) {
    std::vector<double> alpha(m, 1.0);
    bool degenerate = false;
    double value = log_marginal_likelihood(WeightedDirichletModel(DirichletParams(alpha), weight), n);
    for (int cycle = 0; cycle < kFullAlphaCycles; ++cycle) {
      double largest_change = 0.0;
      degenerate = false;
      for (std::size_t i = 0; i < m; ++i) {
        const auto r = maximize_on_log_scale([&](double a) {
          auto trial = alpha;
          trial[i] = a;
          return log_marginal_likelihood(WeightedDirichletModel(DirichletParams(trial), weight), n);
        });
        largest_change = std::max(largest_change, std::abs(std::log(r.x / alpha[i])));
        alpha[i] = r.x;
        value = r.value;
        degenerate = degenerate || r.kind != ThetaKind::interior;
      }
      if (largest_change < 1e-8) break;
    }
    WeightedDirichletModel model(DirichletParams(alpha), weight);
    return {posterior_mean(model, n), model.params(), std::nullopt, value, degenerate, std::nullopt};
  }

  const auto fit = fit_theta(n, sigma);
  const DirichletParams alpha = theta_params(fit.theta, m);
  EbEstimate out{{}, alpha, fit, fit.log_marginal, fit.kind != ThetaKind::interior, std::nullopt};
  if (m == 2 && fit.kind != ThetaKind::interior) {
    out.estimate = fit.kind == ThetaKind::zero_boundary ? std::vector<double>{0.0, 1.0} : std::vector<double>{1.0, 0.0};
    return out;
  }
  out.estimate = posterior_mean(WeightedDirichletModel(alpha, weight), n);
  if (m == 2 && (sigma == 0.0 || sigma == -1.0)) {
    out.closed_form_p1 = two_category_bayes_estimate_closed_form(fit.theta, n[0], n.total(), sigma);
  }
  return out;
}

}  // namespace spx
