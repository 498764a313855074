// Apache License, Version 2.0, refer to LICENSE.txt

#include "simplex_priors/closed_forms.hpp"

#include <algorithm>
#include <cmath>

#include "simplex_priors/errors.hpp"
#include "simplex_priors/special_functions.hpp"

namespace spx {

namespace {

// A signed mixture of Dirichlet components: coefficient * exp(log_mass) is
// the unnormalized weight of component `params`.
struct Component {
  double coefficient;
  double log_mass;
  std::vector<double> params;
};

std::vector<double> dirichlet_mean(const std::vector<double>& a) {
  double total = 0.0;
  for (double v : a) total += v;
  std::vector<double> mean(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) mean[i] = a[i] / total;
  return mean;
}

SquareMatrix dirichlet_covariance(const std::vector<double>& a) {
  double total = 0.0;
  for (double v : a) total += v;
  const std::size_t m = a.size();
  SquareMatrix cov(m);
  const double denom = total * total * (total + 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      cov(i, j) = a[i] * ((i == j ? total : 0.0) - a[j]) / denom;
    }
  }
  return cov;
}

std::vector<double> normalized_weights(const std::vector<Component>& comps) {
  double max_log = -INFINITY;
  for (const auto& c : comps) max_log = std::max(max_log, c.log_mass);
  std::vector<double> w(comps.size());
  double total = 0.0;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    w[j] = comps[j].coefficient * std::exp(comps[j].log_mass - max_log);
    total += w[j];
  }
  if (!(total > 0.0)) throw NumericalError("closed form: normalizer is not positive");
  for (double& v : w) v /= total;
  return w;
}

std::vector<double> mixture_mean(const std::vector<Component>& comps) {
  const auto w = normalized_weights(comps);
  const std::size_t m = comps.front().params.size();
  std::vector<double> mean(m, 0.0);
  for (std::size_t j = 0; j < comps.size(); ++j) {
    const auto mu = dirichlet_mean(comps[j].params);
    for (std::size_t k = 0; k < m; ++k) mean[k] += w[j] * mu[k];
  }
  return mean;
}

SquareMatrix mixture_covariance(const std::vector<Component>& comps, bool include_between) {
  const auto w = normalized_weights(comps);
  const auto mean = mixture_mean(comps);
  const std::size_t m = mean.size();
  SquareMatrix cov(m);
  for (std::size_t j = 0; j < comps.size(); ++j) {
    const auto within = dirichlet_covariance(comps[j].params);
    const auto mu = dirichlet_mean(comps[j].params);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t l = 0; l < m; ++l) {
        double term = within(k, l);
        if (include_between) term += (mu[k] - mean[k]) * (mu[l] - mean[l]);
        cov(k, l) += w[j] * term;
      }
    }
  }
  return cov;
}

std::vector<double> shifted(const DirichletParams& params, const CountVector& n) {
  require_same_dimension(params.dimension(), n.dimension(), "closed form");
  std::vector<double> a(params.values().begin(), params.values().end());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += static_cast<double>(n[i]);
  return a;
}

std::vector<Component> power_sum_components(const DirichletParams& params, const std::vector<int>& r,
                                            const CountVector& n) {
  const auto a = shifted(params, n);
  require_same_dimension(a.size(), r.size(), "power_sum closed form");
  double total = 0.0;
  for (double v : a) total += v;
  std::vector<Component> comps;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (r[i] < 0) throw DomainError("power_sum closed form: negative exponent");
    const double ri = r[i];
    // Γ(a_i + r_i) / (Γ(a_i) Γ(|a| + r_i)); the common prod Γ(a_j) cancels.
    const double log_mass = log_gamma(a[i] + ri) - log_gamma(a[i]) - log_gamma(total + ri);
    auto comp_params = a;
    comp_params[i] += ri;
    comps.push_back({1.0, log_mass, std::move(comp_params)});
  }
  return comps;
}

std::vector<Component> selection_components(const DirichletParams& params, double sigma, const CountVector& n) {
  if (!std::isfinite(sigma) || sigma < -1.0) throw DomainError("selection closed form: sigma must be >= -1");
  const auto a = shifted(params, n);
  double total = 0.0;
  double log_gamma_product = 0.0;
  for (double v : a) {
    total += v;
    log_gamma_product += log_gamma(v);
  }
  std::vector<Component> comps;
  comps.push_back({1.0, log_gamma_product - log_gamma(total), a});
  if (sigma == 0.0) return comps;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double log_mass =
        log_gamma_product - log_gamma(total + 2.0) + log_gamma(a[i] + 2.0) - log_gamma(a[i]);
    auto comp_params = a;
    comp_params[i] += 2.0;
    comps.push_back({sigma, log_mass, std::move(comp_params)});
  }
  return comps;
}

}  // namespace

std::vector<double> dirichlet_posterior_mean_closed_form(const DirichletParams& params, const CountVector& n) {
  return dirichlet_mean(shifted(params, n));
}

SquareMatrix dirichlet_posterior_covariance_closed_form(const DirichletParams& params, const CountVector& n) {
  return dirichlet_covariance(shifted(params, n));
}

std::vector<double> power_sum_posterior_mean_closed_form(const DirichletParams& params, const std::vector<int>& r,
                                                         const CountVector& n) {
  return mixture_mean(power_sum_components(params, r, n));
}

SquareMatrix power_sum_posterior_covariance_closed_form(const DirichletParams& params, const std::vector<int>& r,
                                                        const CountVector& n) {
  return mixture_covariance(power_sum_components(params, r, n), true);
}

std::vector<double> selection_posterior_mean_closed_form(const DirichletParams& params, double sigma,
                                                         const CountVector& n) {
  return mixture_mean(selection_components(params, sigma, n));
}

SquareMatrix selection_posterior_covariance_closed_form(const DirichletParams& params, double sigma,
                                                        const CountVector& n) {
  return mixture_covariance(selection_components(params, sigma, n), true);
}

SquareMatrix selection_within_component_covariance(const DirichletParams& params, double sigma,
                                                   const CountVector& n) {
  return mixture_covariance(selection_components(params, sigma, n), false);
}

}  // namespace spx
