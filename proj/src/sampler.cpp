// Apache License, Version 2.0, refer to LICENSE.txt

#include "simplex_priors/sampler.hpp"

#include <boost/random/gamma_distribution.hpp>
#include <algorithm>
#include <cmath>
#include <string>

#include "simplex_priors/errors.hpp"
#include "simplex_priors/rng.hpp"
#include "simplex_priors/special_functions.hpp"

namespace spx {

namespace {

constexpr int kQuantileMaxIterations = 200;
constexpr std::uint64_t kAcceptanceProbe = 100000;
constexpr double kMinAcceptance = 1e-4;
constexpr double kMinSliceMass = 1e-300;

void require_sigma(double sigma) {
  if (!std::isfinite(sigma) || sigma < -1.0) {
    throw DomainError("selection model: sigma must be finite and >= -1, got " + std::to_string(sigma));
  }
}

}  // namespace

SelectionModel::SelectionModel(DirichletParams p, double s) : params(std::move(p)), sigma(s) { require_sigma(s); }

SelectionConditional::SelectionConditional(double alpha_i, double alpha_last, double sigma, double u, double c)
    : a_(alpha_i), b_(alpha_last), sigma_(sigma), u_(u), c_(c) {
  require_sigma(sigma);
  if (!(u > 0.0)) throw DomainError("conditional: slice mass u must be > 0");
  const double u2 = u * u;
  coeff_[0] = 1.0 + sigma * (c + u2);
  coeff_[1] = -2.0 * sigma * u2;
  coeff_[2] = 2.0 * sigma * u2;
  // E[t^k] under Beta(a, b) is (a)_k / (a + b)_k.
  const double ab = a_ + b_;
  weight_[0] = coeff_[0];
  weight_[1] = coeff_[1] * a_ / ab;
  weight_[2] = coeff_[2] * a_ * (a_ + 1.0) / (ab * (ab + 1.0));
  total_weight_ = weight_[0] + weight_[1] + weight_[2];
  if (!(total_weight_ > 0.0)) throw NumericalError("conditional: normalizing constant is not positive");
  log_beta_ab_ = log_beta(a_, b_);
}

double SelectionConditional::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double i0 = regularized_incomplete_beta(a_, b_, t);
  if (weight_[1] == 0.0 && weight_[2] == 0.0) return i0;
  // I_t(a+1, b) = I_t(a, b) - t^a (1-t)^b / (a B(a, b)), and likewise one step up.
  const double d0 = std::exp(a_ * std::log(t) + b_ * std::log1p(-t) - std::log(a_) - log_beta_ab_);
  const double i1 = i0 - d0;
  const double i2 = i1 - d0 * t * (a_ + b_) / (a_ + 1.0);
  const double value = (weight_[0] * i0 + weight_[1] * i1 + weight_[2] * i2) / total_weight_;
  return std::clamp(value, 0.0, 1.0);
}

double SelectionConditional::density(double t) const {
  if (t < 0.0 || t > 1.0) return 0.0;
  const double poly = coeff_[0] + t * (coeff_[1] + t * coeff_[2]);
  const double base = std::exp((a_ - 1.0) * std::log(t) + (b_ - 1.0) * std::log1p(-t) - log_beta_ab_);
  return std::max(base * poly / total_weight_, 0.0);
}

SelectionConditional SelectionConditional::mirrored() const { return {b_, a_, sigma_, u_, c_}; }

double SelectionConditional::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("conditional quantile: q must lie in [0,1]");
  return q <= 0.5 ? solve_lower(q) : 1.0 - mirrored().solve_lower(1.0 - q);
}

double SelectionConditional::quantile_complement(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("conditional quantile: q must lie in [0,1]");
  return q <= 0.5 ? 1.0 - solve_lower(q) : mirrored().solve_lower(1.0 - q);
}

double SelectionConditional::solve_lower(double q) const {
  if (q == 0.0) return 0.0;
  if (q == 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  double x = std::clamp(a_ / (a_ + b_), 1e-3, 1.0 - 1e-3);
  double fx = cdf(x) - q;
  double dx_old = 1.0;
  double dx = 1.0;
  for (int it = 0; it < kQuantileMaxIterations; ++it) {
    if (fx == 0.0) return x;
    (fx < 0.0 ? lo : hi) = x;
    const double d = density(x);
    const bool newton_ok = std::isfinite(d) && d > 0.0 && ((x - hi) * d - fx) * ((x - lo) * d - fx) < 0.0 &&
                           std::abs(2.0 * fx) <= std::abs(dx_old * d);
    dx_old = dx;
    if (newton_ok) {
      dx = fx / d;
      x -= dx;
    } else {
      dx = 0.5 * (hi - lo);
      x = lo + dx;
    }
    if (std::abs(dx) <= 1e-13 * x || hi - lo <= 1e-15 * hi) return x;
    fx = cdf(x) - q;
    if (std::abs(fx) <= 1e-15 * q) return x;
  }
  return x;
}

double conditional_cdf(const SelectionModel& model, std::size_t i, std::span<const double> others, double t) {
  const std::size_t m = model.dimension();
  if (i + 1 >= m) throw DomainError("conditional_cdf: coordinate index must be a free coordinate (< m - 1)");
  if (others.size() + 2 != m) throw DomainError("conditional_cdf: expected m - 2 other free coordinates");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("conditional_cdf: t must lie in [0,1]");
  double used = 0.0;
  double c = 0.0;
  for (double v : others) {
    if (!(v >= 0.0)) throw DomainError("conditional_cdf: coordinates must be nonnegative");
    used += v;
    c += v * v;
  }
  const double u = 1.0 - used;
  if (!(u > 0.0)) throw DomainError("conditional_cdf: degenerate slice (u <= 0)");
  return SelectionConditional(model.params[i], model.params[m - 1], model.sigma, u, c).cdf(t);
}

ChainConfig ChainConfig::with_defaults(std::uint64_t iterations, std::uint64_t seed) {
  ChainConfig config;
  config.iterations = iterations;
  config.burn_in = iterations / 10;
  config.seed = seed;
  return config;
}

std::uint64_t ChainConfig::retained() const noexcept {
  if (thin == 0 || burn_in >= iterations) return 0;
  return (iterations - burn_in) / thin;
}

void ChainConfig::validate() const {
  if (iterations == 0) throw DomainError("chain: iterations must be positive");
  if (thin == 0) throw DomainError("chain: thin must be positive");
  if (burn_in >= iterations) throw DomainError("chain: burn_in must be smaller than iterations");
  if (retained() < 1) throw DomainError("chain: configuration retains no draws");
}

ChainSummary summarize(const Draws& draws) {
  const std::size_t m = draws.dimension;
  const std::size_t n = draws.size();
  ChainSummary s;
  s.retained = n;
  s.mean.assign(m, 0.0);
  s.variance.assign(m, 0.0);
  s.lag1_autocorrelation.assign(m, 0.0);
  s.mc_standard_error.assign(m, 0.0);
  if (n == 0) return s;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < m; ++i) s.mean[i] += draws.values[k * m + i];
  }
  for (double& v : s.mean) v /= static_cast<double>(n);
  if (n < 2) return s;

  std::vector<double> lag(m, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      const double d = draws.values[k * m + i] - s.mean[i];
      s.variance[i] += d * d;
      if (k + 1 < n) lag[i] += d * (draws.values[(k + 1) * m + i] - s.mean[i]);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    s.lag1_autocorrelation[i] = s.variance[i] > 0.0 ? lag[i] / s.variance[i] : 0.0;
    s.variance[i] /= static_cast<double>(n - 1);
  }

  // Batch means with floor(sqrt(n)) batches.
  const std::size_t batches = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  if (batches < 2) {
    for (std::size_t i = 0; i < m; ++i) s.mc_standard_error[i] = std::sqrt(s.variance[i] / static_cast<double>(n));
    return s;
  }
  const std::size_t length = n / batches;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> means(batches, 0.0);
    for (std::size_t b = 0; b < batches; ++b) {
      for (std::size_t k = b * length; k < (b + 1) * length; ++k) means[b] += draws.values[k * m + i];
      means[b] /= static_cast<double>(length);
    }
    double centre = 0.0;
    for (double v : means) centre += v;
    centre /= static_cast<double>(batches);
    double spread = 0.0;
    for (double v : means) spread += (v - centre) * (v - centre);
    spread /= static_cast<double>(batches - 1);
    s.mc_standard_error[i] = std::sqrt(spread / static_cast<double>(batches));
  }
  return s;
}

ChainResult gibbs_chain(const SelectionModel& model, const ChainConfig& config) {
  config.validate();
  const std::size_t m = model.dimension();
  const std::size_t last = m - 1;
  CounterRng rng(config.seed, config.stream);

  std::vector<double> p(m, 1.0 / static_cast<double>(m));
  ChainResult out;
  out.draws.dimension = m;
  out.draws.values.reserve(config.retained() * m);

  for (std::uint64_t it = 0; it < config.iterations; ++it) {
    for (std::size_t i = 0; i < last; ++i) {
      const double u = p[i] + p[last];
      if (!(u > kMinSliceMass)) {
        ++out.degenerate_slices;
        p[i] = p[last] = 0.5 * u;
        continue;
      }
      double c = 0.0;
      for (std::size_t j = 0; j < last; ++j) {
        if (j != i) c += p[j] * p[j];
      }
      const SelectionConditional conditional(model.params[i], model.params[last], model.sigma, u, c);
      // Place the split from whichever end the quantile was solved at.
      const double v = rng.uniform_open01();
      if (v <= 0.5) {
        p[i] = u * conditional.quantile(v);
        p[last] = std::max(u - p[i], 0.0);
      } else {
        p[last] = u * conditional.quantile_complement(v);
        p[i] = std::max(u - p[last], 0.0);
      }
    }
    if (it >= config.burn_in && (it - config.burn_in + 1) % config.thin == 0) {
      out.draws.values.insert(out.draws.values.end(), p.begin(), p.end());
    }
  }
  out.summary = summarize(out.draws);
  return out;
}

RejectionResult rejection_sample(const SelectionModel& model, std::uint64_t count, std::uint64_t seed,
                                 std::uint64_t stream) {
  const std::size_t m = model.dimension();
  const double sigma = model.sigma;
  const double bound = sigma >= 0.0 ? 1.0 + sigma : 1.0 + sigma / static_cast<double>(m);
  CounterRng rng(seed, stream);
  std::vector<boost::random::gamma_distribution<double>> gammas;
  for (double a : model.params.values()) gammas.emplace_back(a, 1.0);

  RejectionResult out;
  out.draws.dimension = m;
  out.draws.values.reserve(count * m);
  std::vector<double> p(m);
  std::uint64_t accepted = 0;
  while (accepted < count) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      p[i] = gammas[i](rng);
      total += p[i];
    }
    if (!(total > 0.0)) continue;
    for (double& v : p) v /= total;
    ++out.proposals;

    bool accept = true;
    if (sigma != 0.0) {
      double h = 0.0;
      for (double v : p) h += v * v;
      accept = rng.uniform01() * bound < 1.0 + sigma * h;
    }
    if (accept) {
      out.draws.values.insert(out.draws.values.end(), p.begin(), p.end());
      ++accepted;
    }
    if (out.proposals == kAcceptanceProbe &&
        static_cast<double>(accepted) / static_cast<double>(out.proposals) < kMinAcceptance) {
      throw NumericalError("rejection sampler: acceptance rate below 1e-4 over the first 1e5 proposals");
    }
  }
  out.acceptance_rate = out.proposals == 0 ? 1.0 : static_cast<double>(accepted) / static_cast<double>(out.proposals);
  out.summary = summarize(out.draws);
  return out;
}

}  // namespace spx
