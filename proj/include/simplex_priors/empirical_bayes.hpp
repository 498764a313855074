// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <optional>
#include <vector>

#include "simplex_priors/density.hpp"

namespace spx {

/// ln of the ordered-outcome marginal F(n; alpha, g) = E_{alpha,g}[prod p_i^{n_i}]
///   = ln E_alpha[p^n] + ln E_{alpha+n}[g] - ln E_alpha[g].
/// No multinomial coefficient is included.
double log_marginal_likelihood(const WeightedDirichletModel& model, const CountVector& n);

/// F(n; alpha, 1 + sigma H). Throws DomainError for sigma < -1.
double log_marginal_likelihood(const CountVector& n, const DirichletParams& params, double sigma);
double marginal_likelihood(const CountVector& n, const DirichletParams& params, double sigma);

/// ln (|n| choose n_1, ..., n_m).
double log_multinomial_coefficient(const CountVector& n);

/// Probability of n_1 successes in n trials for m = 2, alpha = (theta, 1),
/// g = 1 + sigma H, evaluated from its reduced closed form. Only sigma = 0
/// and sigma = -1 have one; other values throw DomainError.
double two_category_marginal_closed_form(double theta, long n1, long n, double sigma);

/// Posterior mean of p_1 for m = 2, alpha = (theta, 1), sigma in {0, -1},
/// from the shrinkage-form expressions.
double two_category_bayes_estimate_closed_form(double theta, long n1, long n, double sigma);

enum class ThetaKind { zero_boundary, interior, infinity };

const char* to_string(ThetaKind kind);

/// Marginal maximum-likelihood fit of theta in alpha = (theta, 1, ..., 1).
struct MarginalFit {
  ThetaKind kind = ThetaKind::interior;
  double theta = 0.0;  // the maximizer for interior, the scan endpoint otherwise
  /// ln F at the maximizer; at the scan endpoint for the boundary kinds.
  double log_marginal = 0.0;
};

/// Scan range for theta.
inline constexpr double kThetaMin = 1e-6;
inline constexpr double kThetaMax = 1e6;

/// Maximizes F(n; (theta, 1, ..., 1), 1 + sigma H) over theta in (0, inf).
MarginalFit fit_theta(const CountVector& n, double sigma);

/// fit_theta for m = 2 with n = (n1, n - n1). Throws DomainError unless 0 <= n1 <= n.
MarginalFit eb_theta_hat(long n1, long n, double sigma);

struct EbOptions {
  /// Optimize every alpha_i by coordinate-wise golden-section cycles instead
  /// of the (theta, 1, ..., 1) sub-family.
  bool full_alpha = false;
};

struct EbEstimate {
  std::vector<double> estimate;
  DirichletParams alpha;
  std::optional<MarginalFit> theta;  // set for the sub-family fit
  double log_marginal = 0.0;
  /// The fit sits on a boundary (theta -> 0 or theta -> inf, or an alpha_i
  /// at the edge of its search range).
  bool degenerate = false;
  /// The shrinkage-form estimate of p_1 at theta-hat (m = 2, sigma in {0, -1}).
  std::optional<double> closed_form_p1;
};

/// Empirical Bayes: fit the hyperparameters by marginal maximum likelihood,
/// then take the posterior mean. For m = 2 a zero_boundary fit gives (0, 1)
/// and an infinity fit gives (1, 0).
EbEstimate eb_estimate(const CountVector& n, double sigma, const EbOptions& options = {});

}  // namespace spx
