// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <vector>

#include "simplex_priors/density.hpp"

namespace spx {

/// Row-major m x m matrix.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  explicit SquareMatrix(std::size_t size = 0) : n(size), data(size * size, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * n + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * n + c]; }
};

struct PosteriorSummary {
  std::vector<double> mean;
  SquareMatrix covariance;
  double log_normalizer = 0.0;  // ln E_{alpha+n}[g]
};

/// Conjugate update: (alpha, g) with counts n becomes (alpha + n, g).
WeightedDirichletModel posterior_update(const WeightedDirichletModel& model, const CountVector& n);

/// E_{alpha+n}[p_i g] / E_{alpha+n}[g] for every i.
std::vector<double> posterior_mean(const WeightedDirichletModel& model, const CountVector& n);

/// E[p_k p_l g] / E[g] - mean_k mean_l under the posterior.
SquareMatrix posterior_covariance(const WeightedDirichletModel& model, const CountVector& n);

/// Mean, covariance and ln E_{alpha+n}[g] in one pass. Throws NumericalError
/// when ln E_{alpha+n}[g] falls below ln(1e-300).
PosteriorSummary posterior_summary(const WeightedDirichletModel& model, const CountVector& n);

/// Squared-error Bayes estimate; identical to posterior_mean.
std::vector<double> bayes_estimate(const WeightedDirichletModel& model, const CountVector& n);

}  // namespace spx
