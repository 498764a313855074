// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "simplex_priors/types.hpp"

namespace spx {

/// c * prod_i p_i^{powers[i]}
struct Monomial {
  double coefficient;
  std::vector<int> powers;
};

/// A polynomial weight g on the simplex, nonnegative on its whole support.
///
/// Nonnegativity is guaranteed by construction: the named constructors only
/// build weights that are nonnegative by structure, and `from_terms` checks
/// g >= -1e-12 at the vertices, the edge midpoints and 10,000 quasi-random
/// interior points. Products and sums of valid weights stay valid.
///
/// Terms are kept canonical: sorted by exponent vector, like terms merged,
/// zero coefficients dropped.
class PolynomialWeight {
 public:
  /// g = c for c > 0.
  static PolynomialWeight constant(std::size_t m, double c = 1.0);
  /// g = 1 + sigma * H(p), sigma >= -1.
  static PolynomialWeight homozygosity_selection(std::size_t m, double sigma);
  /// g = sum_i p_i^{r_i}, every r_i >= 0.
  static PolynomialWeight power_sum(std::vector<int> r);
  /// Any polynomial whose coefficients are all nonnegative.
  static PolynomialWeight nonnegative_monomials(std::size_t m, std::vector<Monomial> terms);
  /// Arbitrary signed terms, accepted only if numerically nonnegative.
  static PolynomialWeight from_terms(std::size_t m, std::vector<Monomial> terms);

  std::size_t dimension() const noexcept { return m_; }
  std::span<const Monomial> terms() const noexcept { return terms_; }

  double evaluate(std::span<const double> p) const;
  double evaluate(const SimplexPoint& p) const { return evaluate(p.values()); }

  /// True for g = 1 exactly.
  bool is_identity() const noexcept;
  bool has_negative_coefficients() const noexcept;
  int degree() const noexcept;

  /// g * prod_i p_i^{powers[i]}
  PolynomialWeight times_monomial(std::span<const int> powers) const;
  PolynomialWeight operator*(const PolynomialWeight& other) const;
  PolynomialWeight operator+(const PolynomialWeight& other) const;

  friend bool operator==(const PolynomialWeight& a, const PolynomialWeight& b);

 private:
  PolynomialWeight(std::size_t m, std::vector<Monomial> terms);

  std::size_t m_;
  std::vector<Monomial> terms_;
};

/// p_i, the i-th coordinate as a monomial exponent vector.
std::vector<int> unit_powers(std::size_t m, std::size_t i);

}  // namespace spx
