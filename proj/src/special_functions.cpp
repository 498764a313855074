// Apache License, Version 2.0, refer to LICENSE.txt

#include "simplex_priors/special_functions.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <string>

#include "simplex_priors/errors.hpp"

namespace spx {

namespace {

void require_positive(double x, const char* what) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError(std::string(what) + ": argument must be finite and > 0, got " +
                      std::to_string(x));
  }
}

// Rising factorials with more factors than this fall back to lgamma differences.
constexpr long kRisingSumLimit = 64;

}  // namespace

double log_gamma_family(double x, GammaOrder order) {
  switch (order) {
    case GammaOrder::lgamma:
      require_positive(x, "lgamma");
      return boost::math::lgamma(x);
    case GammaOrder::digamma:
      require_positive(x, "digamma");
      return boost::math::digamma(x);
    case GammaOrder::trigamma:
      require_positive(x, "trigamma");
      return boost::math::trigamma(x);
  }
  throw DomainError("log_gamma_family: unknown order");
}

double log_gamma(double x) { return log_gamma_family(x, GammaOrder::lgamma); }
double digamma(double x) { return log_gamma_family(x, GammaOrder::digamma); }
double trigamma(double x) { return log_gamma_family(x, GammaOrder::trigamma); }

double log_rising_factorial(double a, long k) {
  require_positive(a, "log_rising_factorial");
  if (k < 0) throw DomainError("log_rising_factorial: negative count");
  if (k == 0) return 0.0;
  if (k > kRisingSumLimit) return log_gamma(a + static_cast<double>(k)) - log_gamma(a);
  double total = 0.0;
  for (long j = 0; j < k; ++j) total += std::log(a + static_cast<double>(j));
  return total;
}

double regularized_incomplete_beta(double a, double b, double x) {
  require_positive(a, "ibeta");
  require_positive(b, "ibeta");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("ibeta: x must lie in [0,1]");
  return boost::math::ibeta(a, b, x);
}

double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

}  // namespace spx
