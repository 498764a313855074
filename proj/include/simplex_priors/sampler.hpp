// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "simplex_priors/density.hpp"

namespace spx {

/// The selection model alpha with g = 1 + sigma H, sigma >= -1.
struct SelectionModel {
  DirichletParams params;
  double sigma = 0.0;

  SelectionModel(DirichletParams p, double s);
  std::size_t dimension() const noexcept { return params.dimension(); }
  WeightedDirichletModel to_weighted() const { return WeightedDirichletModel::selection(params, sigma); }
};

/// Full conditional of one free coordinate p_i given the other free
/// coordinates, written in the scaled variable t = p_i / u on [0, 1], where
/// u = 1 - sum_{j != i, j < m} p_j is the mass shared by p_i and p_m.
///
/// With b = alpha_m the density in t is proportional to
///   t^{a-1} (1-t)^{b-1} (B0 + B1 t + B2 t^2),   a = alpha_i,
///   B0 = 1 + sigma (c + u^2),  B1 = -2 sigma u^2,  B2 = 2 sigma u^2,
/// c = sum_{j != i, j < m} p_j^2, i.e. a signed combination of Beta(a + k, b)
/// kernels, so the CDF is the matching combination of I_t(a + k, b).
class SelectionConditional {
 public:
  SelectionConditional(double alpha_i, double alpha_last, double sigma, double u, double c);

  double cdf(double t) const;
  double density(double t) const;
  /// Inverse CDF: Newton steps kept inside a shrinking bisection bracket.
  /// Upper-tail levels are solved in 1 - t through the mirrored conditional.
  double quantile(double q) const;
  /// 1 - quantile(q), accurate when the quantile is close to 1.
  double quantile_complement(double q) const;
  /// Conditional of 1 - t: the weight is symmetric, so a and b swap.
  SelectionConditional mirrored() const;

 private:
  double solve_lower(double q) const;

  double a_;
  double b_;
  double sigma_;
  double u_;
  double c_;
  double coeff_[3];
  double weight_[3];
  double total_weight_;
  double log_beta_ab_;
};

/// CDF of the full conditional of free coordinate i (0-based, i < m - 1) at
/// scaled position t. `others` holds the other m - 2 free coordinates in
/// index order. Throws DomainError when the slice has no mass (u <= 0).
double conditional_cdf(const SelectionModel& model, std::size_t i, std::span<const double> others, double t);

struct ChainConfig {
  std::uint64_t iterations = 1000;
  std::uint64_t burn_in = 100;
  std::uint64_t seed = 0;
  std::uint64_t thin = 1;
  std::uint64_t stream = 0;

  /// burn_in = 10% of iterations, thin = 1.
  static ChainConfig with_defaults(std::uint64_t iterations, std::uint64_t seed);

  std::uint64_t retained() const noexcept;
  void validate() const;
};

/// Retained draws, row-major.
struct Draws {
  std::size_t dimension = 0;
  std::vector<double> values;

  std::size_t size() const noexcept { return dimension == 0 ? 0 : values.size() / dimension; }
  std::span<const double> row(std::size_t k) const { return {values.data() + k * dimension, dimension}; }
};

struct ChainSummary {
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> lag1_autocorrelation;
  /// Batch-means Monte Carlo standard error of each mean.
  std::vector<double> mc_standard_error;
  std::uint64_t retained = 0;
};

ChainSummary summarize(const Draws& draws);

struct ChainResult {
  Draws draws;
  ChainSummary summary;
  std::uint64_t degenerate_slices = 0;
};

/// Systematic-scan Gibbs sampler over the free coordinates 1..m-1, started at
/// the barycenter. Deterministic in (seed, stream).
ChainResult gibbs_chain(const SelectionModel& model, const ChainConfig& config);

struct RejectionResult {
  Draws draws;
  ChainSummary summary;
  std::uint64_t proposals = 0;
  double acceptance_rate = 1.0;
};

/// Exact draws: propose from Dirichlet(alpha), accept with probability
/// g(p) / max g, max g = 1 + sigma for sigma >= 0 and 1 + sigma / m otherwise.
/// Throws NumericalError when fewer than 1e-4 of the first 1e5 proposals are accepted.
RejectionResult rejection_sample(const SelectionModel& model, std::uint64_t count, std::uint64_t seed,
                                 std::uint64_t stream = 0);

}  // namespace spx
