// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spx {

/// A point of the unit simplex: m >= 2 probabilities summing to one.
///
/// Inputs whose sum is within 1e-9 of one are renormalized; larger
/// deviations, negative or non-finite entries are rejected.
class SimplexPoint {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit SimplexPoint(std::vector<double> values);

  std::size_t dimension() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  /// True when every coordinate is strictly positive.
  bool interior() const noexcept;
  /// H(p) = sum of squared coordinates.
  double homozygosity() const noexcept;

  static SimplexPoint barycenter(std::size_t m);

 private:
  std::vector<double> values_;
};

/// Dirichlet concentration vector, every entry finite and > 0.
class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> alpha);

  std::size_t dimension() const noexcept { return alpha_.size(); }
  double operator[](std::size_t i) const { return alpha_[i]; }
  std::span<const double> values() const noexcept { return alpha_; }
  double total() const noexcept { return total_; }

 private:
  std::vector<double> alpha_;
  double total_;
};

/// Multinomial category counts.
class CountVector {
 public:
  explicit CountVector(std::vector<long> counts);
  static CountVector zeros(std::size_t m) { return CountVector(std::vector<long>(m, 0)); }

  std::size_t dimension() const noexcept { return counts_.size(); }
  long operator[](std::size_t i) const { return counts_[i]; }
  std::span<const long> values() const noexcept { return counts_; }
  long total() const noexcept { return total_; }

 private:
  std::vector<long> counts_;
  long total_;
};

/// Throws DomainError when the two dimensions differ.
void require_same_dimension(std::size_t a, std::size_t b, const char* context);

/// alpha + n, componentwise.
DirichletParams operator+(const DirichletParams& alpha, const CountVector& n);

}  // namespace spx
