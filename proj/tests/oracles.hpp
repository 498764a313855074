// Apache License, Version 2.0, refer to LICENSE.txt

// Independent reference computations for the tests: quadrature over the
// simplex, gamma-function moments written out from scratch, random inputs.

#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

// Integral over (0, 1). f takes (x, 1 - x) with the complement accurate near x = 1.
template <typename F>
double integrate_unit(F f, double tolerance = 1e-13) {
  static boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule.integrate(
      [&](double x, double xc) -> double {
        const double complement = x < 0.5 ? 1.0 - x : xc;
        return f(x, complement);
      },
      0.0, 1.0, tolerance);
}

// Integral of f(p1, p2) over the 1-simplex, parametrized by p1.
template <typename F>
double integrate_simplex2(F f, double tolerance = 1e-13) {
  return integrate_unit([&](double x, double xc) -> double { return f(x, xc); }, tolerance);
}

// Tensor-product quadrature over the 2-simplex through
// p1 = x, p2 = (1 - x) y, p3 = (1 - x)(1 - y), Jacobian 1 - x.
template <typename F>
double integrate_simplex3(F f, double tolerance = 1e-10) {
  return integrate_unit(
      [&](double x, double xc) -> double {
        const double inner = integrate_unit(
            [&](double y, double yc) -> double {
              const double p2 = xc * y;
              const double p3 = xc * yc;
              // Nodes that underflow onto a face carry no weight.
              return p2 > 0.0 && p3 > 0.0 ? f(x, p2, p3) : 0.0;
            },
            tolerance);
        return xc * inner;
      },
      tolerance);
}

inline double log_dirichlet_density(const std::vector<double>& alpha, const std::vector<double>& p) {
  double total = 0.0;
  double value = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    total += alpha[i];
    value += (alpha[i] - 1.0) * std::log(p[i]) - std::lgamma(alpha[i]);
  }
  return value + std::lgamma(total);
}

// ln E_alpha[prod p_i^{e_i}]
inline double log_moment(const std::vector<double>& alpha, const std::vector<int>& e) {
  double total = 0.0;
  double shift = 0.0;
  double value = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    total += alpha[i];
    shift += e[i];
    value += std::lgamma(alpha[i] + e[i]) - std::lgamma(alpha[i]);
  }
  return value + std::lgamma(total) - std::lgamma(total + shift);
}

// E_alpha[H] written out for a symmetric check of the library formula.
inline double expected_h(const std::vector<double>& alpha) {
  double total = 0.0;
  for (double a : alpha) total += a;
  double s = 0.0;
  for (double a : alpha) s += a * (a + 1.0);
  return s / (total * (total + 1.0));
}

struct Random {
  std::mt19937_64 engine;

  explicit Random(std::uint64_t seed) : engine(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }

  std::vector<double> alpha(std::size_t m, double lo = 0.2, double hi = 10.0) {
    std::vector<double> a(m);
    for (double& v : a) v = log_uniform(lo, hi);
    return a;
  }

  // Uniform on the simplex, kept away from the faces.
  std::vector<double> interior_point(std::size_t m, double floor = 1e-6) {
    for (;;) {
      std::vector<double> p(m);
      double total = 0.0;
      for (double& v : p) {
        v = std::exponential_distribution<double>(1.0)(engine);
        total += v;
      }
      bool ok = true;
      for (double& v : p) {
        v /= total;
        ok = ok && v > floor;
      }
      if (ok) return p;
    }
  }

  // Counts with total at most max_total.
  std::vector<long> counts(std::size_t m, int max_total) {
    const int total = integer(0, max_total);
    std::vector<long> n(m, 0);
    for (int k = 0; k < total; ++k) ++n[static_cast<std::size_t>(integer(0, static_cast<int>(m) - 1))];
    return n;
  }
};

}  // namespace oracle
