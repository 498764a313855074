// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <span>
#include <vector>

#include "simplex_priors/density.hpp"

namespace spx {

/// N >= 1 simplex observations of a common dimension.
///
/// The default constructor rejects boundary points, which have no finite
/// Dirichlet log-likelihood for general alpha. `allowing_boundary` accepts
/// them for analyses that only need H(p) at a fixed alpha with unit entries
/// (the sigma likelihood at alpha = (1, ..., 1), where f_alpha is constant).
class FrequencySample {
 public:
  explicit FrequencySample(std::vector<SimplexPoint> points);
  static FrequencySample allowing_boundary(std::vector<SimplexPoint> points);

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dimension() const noexcept { return points_.front().dimension(); }
  const std::vector<SimplexPoint>& points() const noexcept { return points_; }
  std::span<const double> homozygosities() const noexcept { return homozygosity_; }
  bool all_interior() const noexcept { return all_interior_; }

  /// Per-coordinate mean of ln p_i. Throws DomainError if a boundary point is present.
  std::vector<double> mean_log() const;

 private:
  FrequencySample(std::vector<SimplexPoint> points, bool require_interior);

  std::vector<SimplexPoint> points_;
  std::vector<double> homozygosity_;
  bool all_interior_ = true;
};

enum class SigmaKind { interior, lower_boundary, plus_infinity };

/// A selection-strength estimate on the compactified range [-1, +inf].
struct SigmaEstimate {
  SigmaKind kind = SigmaKind::interior;
  double value = 0.0;  // meaningful for interior; -1 for lower_boundary

  static SigmaEstimate interior(double v);
  static SigmaEstimate lower_boundary() { return {SigmaKind::lower_boundary, -1.0}; }
  static SigmaEstimate plus_infinity() { return {SigmaKind::plus_infinity, 0.0}; }

  bool is_finite() const noexcept { return kind != SigmaKind::plus_infinity; }
};

const char* to_string(SigmaKind kind);

struct DirichletFit {
  DirichletParams alpha;
  int iterations = 0;
  double gradient_norm = 0.0;  // max-norm of the per-observation score
  double log_likelihood = 0.0;
  /// The concentration diverged and was clamped at the upper bound.
  bool degenerate_concentration = false;
};

/// Bounds applied to every alpha iterate.
inline constexpr double kAlphaLowerClamp = 1e-8;
inline constexpr double kAlphaUpperClamp = 1e6;

/// Dirichlet maximum likelihood by damped Newton-Raphson, started from
/// method-of-moments estimates (or all entries equal to the smallest observed
/// proportion when those are inadmissible).
///
/// Identical observations return alpha proportional to the point, scaled so
/// the largest entry sits at the upper clamp, with `degenerate_concentration`
/// set. Throws DataError if N < 2 or if only some coordinates are constant,
/// ConvergenceError after max_iter iterations.
DirichletFit dirichlet_mle(const FrequencySample& sample, double tol = 1e-10, int max_iter = 200);

/// sum_k ln f_alpha(p^k)
double dirichlet_log_likelihood(const FrequencySample& sample, const DirichletParams& params);

/// sum_k [ln f_alpha(p^k) + ln(1 + sigma H_k)] - N ln(1 + sigma E_alpha[H]).
/// Returns -inf at sigma = -1 when some H_k = 1. Throws DomainError for sigma < -1.
double selection_log_likelihood(const FrequencySample& sample, const DirichletParams& params, double sigma);

/// The sigma -> +inf limit: sum_k [ln f_alpha(p^k) + ln(H_k / E_alpha[H])].
double selection_log_likelihood_limit(const FrequencySample& sample, const DirichletParams& params);

double selection_log_likelihood(const FrequencySample& sample, const DirichletParams& params,
                                const SigmaEstimate& sigma);

/// d/dsigma of the selection log-likelihood:
/// sum_k H_k / (1 + sigma H_k) - N E_alpha[H] / (1 + sigma E_alpha[H]).
double sigma_score(const FrequencySample& sample, const DirichletParams& params, double sigma);

/// Global maximizer of the selection log-likelihood over [-1, +inf] at fixed alpha.
SigmaEstimate sigma_mle(const FrequencySample& sample, const DirichletParams& params);

struct SelectionFit {
  DirichletParams alpha;
  SigmaEstimate sigma;
  /// For plus_infinity this is the limiting value.
  double log_likelihood = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool degenerate_concentration = false;
  /// Joint objective after each outer iteration.
  std::vector<double> objective_trace;
};

/// Joint (alpha, sigma) maximum likelihood by block coordinate ascent:
/// Newton in alpha at fixed sigma, then the global sigma maximizer at fixed
/// alpha, until the objective gains less than tol.
SelectionFit selection_mle_joint(const FrequencySample& sample, double tol = 1e-8, int max_iter = 500);

/// Alpha maximum likelihood with sigma held fixed (finite, or plus_infinity
/// for the limiting model). At sigma = 0 this is dirichlet_mle.
SelectionFit selection_mle_fixed_sigma(const FrequencySample& sample, const SigmaEstimate& sigma,
                                       double tol = 1e-10, int max_iter = 200);

}  // namespace spx
