// Apache License, Version 2.0, refer to LICENSE.txt

#include "simplex_priors/posterior.hpp"

#include <cmath>
#include <string>

#include "simplex_priors/errors.hpp"

namespace spx {

namespace {

const double kMinLogNormalizer = std::log(1e-300);

double checked_log_normalizer(const DirichletParams& posterior, const PolynomialWeight& g) {
  const double log_norm = log_polynomial_expectation(posterior, g);
  if (log_norm < kMinLogNormalizer) {
    throw NumericalError("posterior: ln E[g] = " + std::to_string(log_norm) +
                         " underflows; the posterior is numerically degenerate");
  }
  return log_norm;
}

std::vector<double> mean_from(const DirichletParams& posterior, const PolynomialWeight& g, double log_norm) {
  const std::size_t m = posterior.dimension();
  std::vector<double> mean(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto gi = g.times_monomial(unit_powers(m, i));
    mean[i] = std::exp(log_polynomial_expectation(posterior, gi) - log_norm);
  }
  return mean;
}

SquareMatrix covariance_from(const DirichletParams& posterior, const PolynomialWeight& g, double log_norm,
                             const std::vector<double>& mean) {
  const std::size_t m = posterior.dimension();
  SquareMatrix cov(m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = k; l < m; ++l) {
      std::vector<int> powers(m, 0);
      powers[k] += 1;
      powers[l] += 1;
      const double second = std::exp(log_polynomial_expectation(posterior, g.times_monomial(powers)) - log_norm);
      cov(k, l) = cov(l, k) = second - mean[k] * mean[l];
    }
  }
  return cov;
}

}  // namespace

WeightedDirichletModel posterior_update(const WeightedDirichletModel& model, const CountVector& n) {
  require_same_dimension(model.dimension(), n.dimension(), "posterior_update");
  return WeightedDirichletModel(model.params() + n, model.weight());
}

std::vector<double> posterior_mean(const WeightedDirichletModel& model, const CountVector& n) {
  const auto posterior = model.params() + n;
  const double log_norm = checked_log_normalizer(posterior, model.weight());
  return mean_from(posterior, model.weight(), log_norm);
}

SquareMatrix posterior_covariance(const WeightedDirichletModel& model, const CountVector& n) {
  return posterior_summary(model, n).covariance;
}

PosteriorSummary posterior_summary(const WeightedDirichletModel& model, const CountVector& n) {
  const auto posterior = model.params() + n;
  PosteriorSummary out;
  out.log_normalizer = checked_log_normalizer(posterior, model.weight());
  out.mean = mean_from(posterior, model.weight(), out.log_normalizer);
  out.covariance = covariance_from(posterior, model.weight(), out.log_normalizer, out.mean);
  return out;
}

std::vector<double> bayes_estimate(const WeightedDirichletModel& model, const CountVector& n) {
  return posterior_mean(model, n);
}

}  // namespace spx
