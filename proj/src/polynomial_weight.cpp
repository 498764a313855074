// Apache License, Version 2.0, refer to LICENSE.txt

#include "simplex_priors/polynomial_weight.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simplex_priors/errors.hpp"

namespace spx {

namespace {

constexpr double kNegativityTolerance = 1e-12;
constexpr int kVerificationPoints = 10000;

void validate_terms(std::size_t m, const std::vector<Monomial>& terms) {
  if (m < 2) throw DomainError("PolynomialWeight: dimension must be at least 2");
  if (terms.empty()) throw DomainError("PolynomialWeight: at least one term required");
  for (const auto& t : terms) {
    if (t.powers.size() != m) throw DomainError("PolynomialWeight: power vector has wrong length");
    if (!std::isfinite(t.coefficient)) throw DomainError("PolynomialWeight: non-finite coefficient");
    for (int k : t.powers) {
      if (k < 0) throw DomainError("PolynomialWeight: negative exponent");
    }
  }
}

// Generalized golden-ratio (Kronecker) sequence mapped onto the simplex
// through normalized exponential spacings.
std::vector<std::vector<double>> quasi_random_simplex_points(std::size_t m, int count) {
  // phi_m solves x^{m+1} = x + 1.
  double phi = 2.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(m + 1));
  std::vector<double> step(m);
  for (std::size_t j = 0; j < m; ++j) step[j] = std::fmod(std::pow(1.0 / phi, static_cast<double>(j + 1)), 1.0);

  std::vector<std::vector<double>> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) {
    std::vector<double> p(m);
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double u = std::fmod(0.5 + step[j] * static_cast<double>(k), 1.0);
      u = std::clamp(u, 1e-300, 1.0 - 1e-16);
      p[j] = -std::log(u);
      sum += p[j];
    }
    for (double& v : p) v /= sum;
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace

PolynomialWeight::PolynomialWeight(std::size_t m, std::vector<Monomial> terms) : m_(m) {
  std::sort(terms.begin(), terms.end(),
            [](const Monomial& a, const Monomial& b) { return a.powers < b.powers; });
  for (auto& t : terms) {
    if (!terms_.empty() && terms_.back().powers == t.powers) {
      terms_.back().coefficient += t.coefficient;
    } else {
      terms_.push_back(std::move(t));
    }
  }
  std::erase_if(terms_, [](const Monomial& t) { return t.coefficient == 0.0; });
  if (terms_.empty()) throw DomainError("PolynomialWeight: weight is identically zero");
}

PolynomialWeight PolynomialWeight::constant(std::size_t m, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("PolynomialWeight: constant must be > 0");
  std::vector<Monomial> terms{{c, std::vector<int>(m, 0)}};
  validate_terms(m, terms);
  return PolynomialWeight(m, std::move(terms));
}

PolynomialWeight PolynomialWeight::homozygosity_selection(std::size_t m, double sigma) {
  if (!std::isfinite(sigma) || sigma < -1.0) {
    throw DomainError("homozygosity selection: sigma must be finite and >= -1, got " +
                      std::to_string(sigma));
  }
  std::vector<Monomial> terms{{1.0, std::vector<int>(m, 0)}};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<int> powers(m, 0);
    powers[i] = 2;
    terms.push_back({sigma, std::move(powers)});
  }
  validate_terms(m, terms);
  return PolynomialWeight(m, std::move(terms));
}

PolynomialWeight PolynomialWeight::power_sum(std::vector<int> r) {
  const std::size_t m = r.size();
  std::vector<Monomial> terms;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<int> powers(m, 0);
    powers[i] = r[i];
    terms.push_back({1.0, std::move(powers)});
  }
  validate_terms(m, terms);
  return PolynomialWeight(m, std::move(terms));
}

PolynomialWeight PolynomialWeight::nonnegative_monomials(std::size_t m, std::vector<Monomial> terms) {
  validate_terms(m, terms);
  for (const auto& t : terms) {
    if (t.coefficient < 0.0) throw DomainError("nonnegative_monomials: negative coefficient");
  }
  return PolynomialWeight(m, std::move(terms));
}

PolynomialWeight PolynomialWeight::from_terms(std::size_t m, std::vector<Monomial> terms) {
  validate_terms(m, terms);
  PolynomialWeight g(m, std::move(terms));
  if (!g.has_negative_coefficients()) return g;

  auto check = [&](std::span<const double> p) {
    const double value = g.evaluate(p);
    if (value < -kNegativityTolerance) {
      throw DomainError("PolynomialWeight: weight is negative (" + std::to_string(value) +
                        ") somewhere on the simplex");
    }
  };
  std::vector<double> p(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(p.begin(), p.end(), 0.0);
    p[i] = 1.0;
    check(p);
    for (std::size_t j = i + 1; j < m; ++j) {
      std::fill(p.begin(), p.end(), 0.0);
      p[i] = p[j] = 0.5;
      check(p);
    }
  }
  for (const auto& q : quasi_random_simplex_points(m, kVerificationPoints)) check(q);
  return g;
}

double PolynomialWeight::evaluate(std::span<const double> p) const {
  require_same_dimension(p.size(), m_, "PolynomialWeight::evaluate");
  double total = 0.0;
  for (const auto& t : terms_) {
    double value = t.coefficient;
    for (std::size_t i = 0; i < m_; ++i) {
      for (int k = 0; k < t.powers[i]; ++k) value *= p[i];
    }
    total += value;
  }
  return total;
}

bool PolynomialWeight::is_identity() const noexcept {
  if (terms_.size() != 1 || terms_[0].coefficient != 1.0) return false;
  return std::all_of(terms_[0].powers.begin(), terms_[0].powers.end(), [](int k) { return k == 0; });
}

bool PolynomialWeight::has_negative_coefficients() const noexcept {
  return std::any_of(terms_.begin(), terms_.end(), [](const Monomial& t) { return t.coefficient < 0.0; });
}

int PolynomialWeight::degree() const noexcept {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int k : t.powers) s += k;
    d = std::max(d, s);
  }
  return d;
}

PolynomialWeight PolynomialWeight::times_monomial(std::span<const int> powers) const {
  require_same_dimension(powers.size(), m_, "PolynomialWeight::times_monomial");
  std::vector<Monomial> out = terms_;
  for (auto& t : out) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (powers[i] < 0) throw DomainError("times_monomial: negative exponent");
      t.powers[i] += powers[i];
    }
  }
  return PolynomialWeight(m_, std::move(out));
}

PolynomialWeight PolynomialWeight::operator*(const PolynomialWeight& other) const {
  require_same_dimension(other.m_, m_, "PolynomialWeight product");
  std::vector<Monomial> out;
  out.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      Monomial t{a.coefficient * b.coefficient, a.powers};
      for (std::size_t i = 0; i < m_; ++i) t.powers[i] += b.powers[i];
      out.push_back(std::move(t));
    }
  }
  return PolynomialWeight(m_, std::move(out));
}

PolynomialWeight PolynomialWeight::operator+(const PolynomialWeight& other) const {
  require_same_dimension(other.m_, m_, "PolynomialWeight sum");
  std::vector<Monomial> out = terms_;
  out.insert(out.end(), other.terms_.begin(), other.terms_.end());
  return PolynomialWeight(m_, std::move(out));
}

bool operator==(const PolynomialWeight& a, const PolynomialWeight& b) {
  if (a.m_ != b.m_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t j = 0; j < a.terms_.size(); ++j) {
    if (a.terms_[j].coefficient != b.terms_[j].coefficient || a.terms_[j].powers != b.terms_[j].powers) {
      return false;
    }
  }
  return true;
}

std::vector<int> unit_powers(std::size_t m, std::size_t i) {
  std::vector<int> powers(m, 0);
  powers.at(i) = 1;
  return powers;
}

}  // namespace spx
