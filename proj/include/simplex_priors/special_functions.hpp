// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

namespace spx {

enum class GammaOrder { lgamma, digamma, trigamma };

/// ln Γ(x), ψ(x) or ψ'(x) for finite x > 0. Throws DomainError otherwise.
double log_gamma_family(double x, GammaOrder order);

double log_gamma(double x);
double digamma(double x);
double trigamma(double x);

/// ln Γ(a + k) - ln Γ(a) for a > 0 and integer k >= 0.
/// Summed as logs of the rising factorial for small k, which keeps the
/// result exact-ish where the lgamma difference would cancel.
double log_rising_factorial(double a, long k);

/// Regularized incomplete beta I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

/// ln B(a, b).
double log_beta(double a, double b);

}  // namespace spx
