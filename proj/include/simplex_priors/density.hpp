// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <span>
#include <vector>

#include "simplex_priors/polynomial_weight.hpp"
#include "simplex_priors/types.hpp"

namespace spx {

/// One member of the weighted Dirichlet family: density f_alpha(p) g(p) / E_alpha[g].
class WeightedDirichletModel {
 public:
  WeightedDirichletModel(DirichletParams params, PolynomialWeight weight);

  /// g = 1
  static WeightedDirichletModel dirichlet(DirichletParams params);
  /// g = 1 + sigma H
  static WeightedDirichletModel selection(DirichletParams params, double sigma);

  const DirichletParams& params() const noexcept { return params_; }
  const PolynomialWeight& weight() const noexcept { return weight_; }
  std::size_t dimension() const noexcept { return params_.dimension(); }

 private:
  DirichletParams params_;
  PolynomialWeight weight_;
};

/// ln f_alpha(p). Boundary coordinates with alpha_i > 1 give -inf; a zero
/// coordinate with alpha_i < 1 is a domain error (the density is unbounded).
double dirichlet_log_density(const DirichletParams& params, const SimplexPoint& p);

/// ln E_alpha[prod_i p_i^{k_i}] as ln Γ(|alpha|) - ln Γ(|alpha|+|k|) + sum ln Γ(alpha_i+k_i)/Γ(alpha_i).
double log_dirichlet_moment(const DirichletParams& params, std::span<const int> exponents);
double log_dirichlet_moment(const DirichletParams& params, const CountVector& exponents);

/// E_alpha[prod_i p_i^{n_i}]; exactly 1 for zero exponents.
double dirichlet_moment(const DirichletParams& params, const CountVector& exponents);
double dirichlet_moment(const DirichletParams& params, std::span<const int> exponents);

/// E_alpha[g] by linearity over the monomial terms. Throws NumericalError
/// when the result is not positive.
double polynomial_expectation(const DirichletParams& params, const PolynomialWeight& weight);

/// ln E_alpha[g], with the largest term factored out so that moments which
/// would underflow on their own are still usable.
double log_polynomial_expectation(const DirichletParams& params, const PolynomialWeight& weight);

/// E_alpha[H] = sum alpha_i (alpha_i + 1) / (|alpha| (|alpha| + 1)).
double expected_homozygosity(const DirichletParams& params);

/// ln of f_alpha(p) g(p) / E_alpha[g]. -inf where g(p) = 0.
double weighted_log_density(const WeightedDirichletModel& model, const SimplexPoint& p);

struct MixtureComponent {
  double weight;
  DirichletParams params;
};

/// The density as sum_j w_j f_{alpha + k_j}. `is_signed` is set when some
/// weight is negative, i.e. a linear rather than convex combination.
struct MixtureDecomposition {
  std::vector<MixtureComponent> components;
  bool is_signed = false;

  double density(const SimplexPoint& p) const;
};

MixtureDecomposition mixture_decomposition(const WeightedDirichletModel& model);

}  // namespace spx
