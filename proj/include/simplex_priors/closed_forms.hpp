// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

// Closed-form posterior moments for the three named weight families. These
// are written against explicit gamma-function expressions rather than the
// generic polynomial-moment path in posterior.hpp, so the two can be checked
// against each other.

#include <vector>

#include "simplex_priors/posterior.hpp"

namespace spx {

/// g = 1: (alpha_i + n_i) / (|alpha| + |n|).
std::vector<double> dirichlet_posterior_mean_closed_form(const DirichletParams& params, const CountVector& n);
SquareMatrix dirichlet_posterior_covariance_closed_form(const DirichletParams& params, const CountVector& n);

/// g = sum_i p_i^{r_i}: a convex combination of Dirichlet(alpha + n + r_i e_i).
std::vector<double> power_sum_posterior_mean_closed_form(const DirichletParams& params, const std::vector<int>& r,
                                                         const CountVector& n);
SquareMatrix power_sum_posterior_covariance_closed_form(const DirichletParams& params, const std::vector<int>& r,
                                                        const CountVector& n);

/// g = 1 + sigma H: posterior mean from the normalizer
/// C(a) = prod Γ(a_i) [1/Γ(|a|) + sigma/Γ(|a|+2) sum_i Γ(a_i+2)/Γ(a_i)], a = alpha + n,
/// each term evaluated in log space. Throws DomainError for sigma < -1.
std::vector<double> selection_posterior_mean_closed_form(const DirichletParams& params, double sigma,
                                                         const CountVector& n);

/// Covariance of the same signed mixture. Includes the between-component
/// term sum_j w_j (mu_j - mu)(mu_j - mu)^T on top of the within-component
/// covariances.
SquareMatrix selection_posterior_covariance_closed_form(const DirichletParams& params, double sigma,
                                                        const CountVector& n);

/// Only the within-component part, sum_j w_j Cov_j, for comparison.
SquareMatrix selection_within_component_covariance(const DirichletParams& params, double sigma,
                                                   const CountVector& n);

}  // namespace spx
