// Apache License, Version 2.0, refer to LICENSE.txt

#include "simplex_priors/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "simplex_priors/errors.hpp"
#include "simplex_priors/special_functions.hpp"

namespace spx {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <typename Int>
double log_moment_impl(const DirichletParams& params, std::span<const Int> exponents) {
  require_same_dimension(params.dimension(), exponents.size(), "dirichlet_moment");
  long total = 0;
  double log_value = 0.0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0) throw DomainError("dirichlet_moment: negative exponent");
    if (exponents[i] == 0) continue;
    total += static_cast<long>(exponents[i]);
    log_value += log_rising_factorial(params[i], static_cast<long>(exponents[i]));
  }
  if (total == 0) return 0.0;
  return log_value - log_rising_factorial(params.total(), total);
}

struct ScaledSum {
  double scaled;   // sum_j c_j exp(L_j - max_log)
  double max_log;  // max_j L_j
};

ScaledSum scaled_expectation(const DirichletParams& params, const PolynomialWeight& weight) {
  require_same_dimension(params.dimension(), weight.dimension(), "polynomial_expectation");
  std::vector<double> logs;
  logs.reserve(weight.terms().size());
  for (const auto& t : weight.terms()) {
    logs.push_back(log_moment_impl<int>(params, t.powers));
  }
  const double max_log = *std::max_element(logs.begin(), logs.end());
  double scaled = 0.0;
  for (std::size_t j = 0; j < logs.size(); ++j) {
    scaled += weight.terms()[j].coefficient * std::exp(logs[j] - max_log);
  }
  if (!(scaled > 0.0)) {
    throw NumericalError("polynomial_expectation: E[g] = " + std::to_string(scaled) +
                         " is not positive; the weight is invalid for these parameters");
  }
  return {scaled, max_log};
}

}  // namespace

WeightedDirichletModel::WeightedDirichletModel(DirichletParams params, PolynomialWeight weight)
    : params_(std::move(params)), weight_(std::move(weight)) {
  require_same_dimension(params_.dimension(), weight_.dimension(), "WeightedDirichletModel");
}

WeightedDirichletModel WeightedDirichletModel::dirichlet(DirichletParams params) {
  const std::size_t m = params.dimension();
  return WeightedDirichletModel(std::move(params), PolynomialWeight::constant(m));
}

WeightedDirichletModel WeightedDirichletModel::selection(DirichletParams params, double sigma) {
  const std::size_t m = params.dimension();
  return WeightedDirichletModel(std::move(params), PolynomialWeight::homozygosity_selection(m, sigma));
}

double dirichlet_log_density(const DirichletParams& params, const SimplexPoint& p) {
  require_same_dimension(params.dimension(), p.dimension(), "dirichlet_log_density");
  double value = log_gamma(params.total());
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    const double a = params[i];
    value -= log_gamma(a);
    if (a == 1.0) continue;
    if (p[i] == 0.0) {
      if (a > 1.0) return kNegInf;
      throw DomainError("dirichlet_log_density: density is unbounded at a boundary point with alpha_i < 1");
    }
    value += (a - 1.0) * std::log(p[i]);
  }
  return value;
}

double log_dirichlet_moment(const DirichletParams& params, std::span<const int> exponents) {
  return log_moment_impl<int>(params, exponents);
}

double log_dirichlet_moment(const DirichletParams& params, const CountVector& exponents) {
  return log_moment_impl<long>(params, exponents.values());
}

double dirichlet_moment(const DirichletParams& params, const CountVector& exponents) {
  if (exponents.total() == 0) {
    require_same_dimension(params.dimension(), exponents.dimension(), "dirichlet_moment");
    return 1.0;
  }
  return std::exp(log_dirichlet_moment(params, exponents));
}

double dirichlet_moment(const DirichletParams& params, std::span<const int> exponents) {
  return std::exp(log_dirichlet_moment(params, exponents));
}

double polynomial_expectation(const DirichletParams& params, const PolynomialWeight& weight) {
  const auto s = scaled_expectation(params, weight);
  return s.scaled * std::exp(s.max_log);
}

double log_polynomial_expectation(const DirichletParams& params, const PolynomialWeight& weight) {
  const auto s = scaled_expectation(params, weight);
  return std::log(s.scaled) + s.max_log;
}

double expected_homozygosity(const DirichletParams& params) {
  double numerator = 0.0;
  for (double a : params.values()) numerator += a * (a + 1.0);
  const double total = params.total();
  return numerator / (total * (total + 1.0));
}

double weighted_log_density(const WeightedDirichletModel& model, const SimplexPoint& p) {
  if (model.weight().is_identity()) return dirichlet_log_density(model.params(), p);
  const double g = model.weight().evaluate(p);
  if (g < -1e-12) {
    throw DomainError("weighted_log_density: weight is negative (" + std::to_string(g) + ") at p");
  }
  if (g <= 0.0) return kNegInf;
  const double base = dirichlet_log_density(model.params(), p);
  return base + std::log(g) - log_polynomial_expectation(model.params(), model.weight());
}

double MixtureDecomposition::density(const SimplexPoint& p) const {
  double total = 0.0;
  for (const auto& c : components) total += c.weight * std::exp(dirichlet_log_density(c.params, p));
  return total;
}

MixtureDecomposition mixture_decomposition(const WeightedDirichletModel& model) {
  const auto& params = model.params();
  const auto& weight = model.weight();
  const double log_norm = log_polynomial_expectation(params, weight);

  MixtureDecomposition out;
  double mass = 0.0;
  for (const auto& t : weight.terms()) {
    std::vector<double> alpha(params.values().begin(), params.values().end());
    for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] += t.powers[i];
    const double w = t.coefficient * std::exp(log_dirichlet_moment(params, t.powers) - log_norm);
    mass += w;
    out.is_signed = out.is_signed || w < 0.0;
    out.components.push_back({w, DirichletParams(std::move(alpha))});
  }
  if (!(mass > 0.0)) throw NumericalError("mixture_decomposition: total weight mass is not positive");
  return out;
}

}  // namespace spx
