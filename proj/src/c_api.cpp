// Apache License, Version 2.0, refer to LICENSE.txt

#include "simplex_priors/simplex_priors.h"

#include <cmath>
#include <algorithm>
#include <memory>
#include <new>
#include <string>

#include "simplex_priors/empirical_bayes.hpp"
#include "simplex_priors/errors.hpp"
#include "simplex_priors/posterior.hpp"
#include "simplex_priors/toolkit.hpp"

struct spx_request {
  spx::toolkit::Options options;
  std::string input;
};

struct spx_result {
  std::string json;
  std::string csv;
};

namespace {

thread_local std::string last_error;
thread_local std::size_t last_row = 0;

spx_status fail(spx_status status, const std::string& message, std::size_t row = 0) {
  last_error = message;
  last_row = row;
  return status;
}

template <typename F>
spx_status guarded(F&& body) {
  last_error.clear();
  last_row = 0;
  try {
    body();
    return SPX_OK;
  } catch (const spx::DataError& e) {
    return fail(SPX_DATA_ERROR, e.what(), e.row());
  } catch (const spx::NumericalError& e) {
    return fail(SPX_NUMERICAL_ERROR, e.what());
  } catch (const std::domain_error& e) {
    return fail(SPX_INVALID_ARGUMENT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SPX_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SPX_INTERNAL_ERROR, "out of memory");
  } catch (const std::runtime_error& e) {
    return fail(SPX_NUMERICAL_ERROR, e.what());
  } catch (const std::exception& e) {
    return fail(SPX_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(SPX_INTERNAL_ERROR, "unknown exception");
  }
}

spx_status null_argument(const char* name) { return fail(SPX_INVALID_ARGUMENT, std::string(name) + " is null"); }

spx::FrequencySample frequency_sample(const double* values, std::size_t rows, std::size_t m) {
  std::vector<spx::SimplexPoint> points;
  points.reserve(rows);
  for (std::size_t k = 0; k < rows; ++k) points.emplace_back(std::vector<double>(values + k * m, values + (k + 1) * m));
  return spx::FrequencySample(std::move(points));
}

}  // namespace

extern "C" {

const char* spx_version(void) { return "1.0.0"; }

const char* spx_status_code(spx_status status) {
  switch (status) {
    case SPX_OK:
      return "OK";
    case SPX_INTERNAL_ERROR:
      return "E_INTERNAL";
    case SPX_INVALID_ARGUMENT:
      return "E_USAGE";
    case SPX_DATA_ERROR:
      return "E_DATA";
    case SPX_NUMERICAL_ERROR:
      return "E_NUMERICAL";
  }
  return "E_UNKNOWN";
}

const char* spx_last_error(void) { return last_error.c_str(); }

size_t spx_last_error_row(void) { return last_row; }

spx_status spx_request_new(spx_request** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new spx_request(); });
}

void spx_request_free(spx_request* request) { delete request; }

spx_status spx_request_set_model(spx_request* request, spx_model_kind kind) {
  if (!request) return null_argument("request");
  switch (kind) {
    case SPX_MODEL_DIRICHLET:
      request->options.model = spx::toolkit::ModelKind::dirichlet;
      return SPX_OK;
    case SPX_MODEL_SELECTION:
      request->options.model = spx::toolkit::ModelKind::selection;
      return SPX_OK;
    case SPX_MODEL_MIXTURE:
      request->options.model = spx::toolkit::ModelKind::mixture;
      return SPX_OK;
  }
  return fail(SPX_INVALID_ARGUMENT, "unknown model kind");
}

spx_status spx_request_set_input(spx_request* request, const char* path) {
  if (!request || !path) return null_argument(request ? "path" : "request");
  return guarded([&] { request->input = path; });
}

spx_status spx_request_set_alpha(spx_request* request, const double* alpha, size_t m) {
  if (!request || !alpha) return null_argument(request ? "alpha" : "request");
  return guarded([&] { request->options.alpha = std::vector<double>(alpha, alpha + m); });
}

spx_status spx_request_set_sigma(spx_request* request, double sigma) {
  if (!request) return null_argument("request");
  if (std::isnan(sigma) || sigma < -1.0) return fail(SPX_INVALID_ARGUMENT, "sigma must lie in [-1, inf]");
  request->options.sigma = sigma;
  return SPX_OK;
}

spx_status spx_request_set_r(spx_request* request, const int* r, size_t m) {
  if (!request || !r) return null_argument(request ? "r" : "request");
  return guarded([&] { request->options.r = std::vector<int>(r, r + m); });
}

spx_status spx_request_set_counts(spx_request* request, const long* counts, size_t m) {
  if (!request || !counts) return null_argument(request ? "counts" : "request");
  return guarded([&] { request->options.counts = std::vector<long>(counts, counts + m); });
}

spx_status spx_request_set_seed(spx_request* request, uint64_t seed) {
  if (!request) return null_argument("request");
  request->options.seed = seed;
  return SPX_OK;
}

spx_status spx_request_set_iterations(spx_request* request, uint64_t iterations) {
  if (!request) return null_argument("request");
  request->options.iterations = iterations;
  return SPX_OK;
}

spx_status spx_request_set_burn_in(spx_request* request, uint64_t burn_in) {
  if (!request) return null_argument("request");
  request->options.burn_in = burn_in;
  return SPX_OK;
}

spx_status spx_request_set_thin(spx_request* request, uint64_t thin) {
  if (!request) return null_argument("request");
  request->options.thin = thin;
  return SPX_OK;
}

spx_status spx_request_set_method(spx_request* request, spx_method method) {
  if (!request) return null_argument("request");
  if (method != SPX_METHOD_GIBBS && method != SPX_METHOD_REJECTION) {
    return fail(SPX_INVALID_ARGUMENT, "unknown sampling method");
  }
  request->options.method =
      method == SPX_METHOD_GIBBS ? spx::toolkit::SampleMethod::gibbs : spx::toolkit::SampleMethod::rejection;
  return SPX_OK;
}

spx_status spx_request_set_grid(spx_request* request, double min, double max, double step) {
  if (!request) return null_argument("request");
  request->options.grid = {min, max, step};
  return SPX_OK;
}

spx_status spx_request_set_full_alpha(spx_request* request, int enabled) {
  if (!request) return null_argument("request");
  request->options.full_alpha = enabled != 0;
  return SPX_OK;
}

spx_status spx_run(const spx_request* request, spx_command command, spx_result** out) {
  if (!request || !out) return null_argument(request ? "out" : "request");
  *out = nullptr;
  return guarded([&] {
    namespace tk = spx::toolkit;
    const auto& o = request->options;
    auto frequencies = [&] {
      if (request->input.empty()) throw spx::DomainError("--input is required");
      return tk::ingest(request->input, tk::DatasetKind::frequencies);
    };
    auto counts = [&] {
      if (o.counts) return spx::CountVector(*o.counts);
      if (request->input.empty()) throw spx::DomainError("--counts or --input is required");
      return *tk::ingest(request->input, tk::DatasetKind::counts).counts;
    };
    auto result = std::make_unique<spx_result>();
    switch (command) {
      case SPX_COMMAND_FIT:
        result->json = tk::render(tk::cmd_fit(frequencies(), o));
        break;
      case SPX_COMMAND_POSTERIOR:
        result->json = tk::cmd_posterior(counts(), o);
        break;
      case SPX_COMMAND_EB:
        result->json = tk::cmd_eb(counts(), o);
        break;
      case SPX_COMMAND_SAMPLE: {
        auto sample = tk::cmd_sample(o);
        result->json = std::move(sample.summary_json);
        result->csv = tk::render_draws(sample.draws);
        break;
      }
      case SPX_COMMAND_CURVE:
        result->csv = tk::render_curve(tk::cmd_curve(frequencies(), o));
        break;
      default:
        throw spx::DomainError("unknown command");
    }
    *out = result.release();
  });
}

const char* spx_result_json(const spx_result* result) { return result ? result->json.c_str() : ""; }

const char* spx_result_csv(const spx_result* result) { return result ? result->csv.c_str() : ""; }

void spx_result_free(spx_result* result) { delete result; }

spx_status spx_posterior_mean(const double* alpha, const long* counts, size_t m, double sigma, double* mean) {
  if (!alpha || !counts || !mean) return null_argument("array argument");
  return guarded([&] {
    const auto model = spx::WeightedDirichletModel::selection(spx::DirichletParams({alpha, alpha + m}), sigma);
    const auto value = spx::posterior_mean(model, spx::CountVector({counts, counts + m}));
    std::copy(value.begin(), value.end(), mean);
  });
}

spx_status spx_dirichlet_mle(const double* frequencies, size_t rows, size_t m, double* alpha, double* gradient_norm) {
  if (!frequencies || !alpha) return null_argument("array argument");
  return guarded([&] {
    const auto fit = spx::dirichlet_mle(frequency_sample(frequencies, rows, m));
    std::copy(fit.alpha.values().begin(), fit.alpha.values().end(), alpha);
    if (gradient_norm) *gradient_norm = fit.gradient_norm;
  });
}

spx_status spx_sigma_mle(const double* frequencies, size_t rows, size_t m, const double* alpha, spx_sigma_kind* kind,
                         double* sigma) {
  if (!frequencies || !alpha || !kind || !sigma) return null_argument("argument");
  return guarded([&] {
    std::vector<spx::SimplexPoint> points;
    for (std::size_t k = 0; k < rows; ++k) {
      points.emplace_back(std::vector<double>(frequencies + k * m, frequencies + (k + 1) * m));
    }
    const auto sample = spx::FrequencySample::allowing_boundary(std::move(points));
    const auto estimate = spx::sigma_mle(sample, spx::DirichletParams({alpha, alpha + m}));
    switch (estimate.kind) {
      case spx::SigmaKind::interior:
        *kind = SPX_SIGMA_INTERIOR;
        break;
      case spx::SigmaKind::lower_boundary:
        *kind = SPX_SIGMA_LOWER_BOUNDARY;
        break;
      case spx::SigmaKind::plus_infinity:
        *kind = SPX_SIGMA_PLUS_INFINITY;
        break;
    }
    *sigma = estimate.is_finite() ? estimate.value : INFINITY;
  });
}

spx_status spx_eb_theta(long n1, long n, double sigma, spx_theta_kind* kind, double* theta) {
  if (!kind || !theta) return null_argument("output argument");
  return guarded([&] {
    const auto fit = spx::eb_theta_hat(n1, n, sigma);
    switch (fit.kind) {
      case spx::ThetaKind::zero_boundary:
        *kind = SPX_THETA_ZERO;
        *theta = 0.0;
        break;
      case spx::ThetaKind::interior:
        *kind = SPX_THETA_INTERIOR;
        *theta = fit.theta;
        break;
      case spx::ThetaKind::infinity:
        *kind = SPX_THETA_INFINITY;
        *theta = INFINITY;
        break;
    }
  });
}

spx_status spx_log_marginal(const double* alpha, const long* counts, size_t m, double sigma, double* log_marginal) {
  if (!alpha || !counts || !log_marginal) return null_argument("argument");
  return guarded([&] {
    *log_marginal = spx::log_marginal_likelihood(spx::CountVector({counts, counts + m}),
                                                 spx::DirichletParams({alpha, alpha + m}), sigma);
  });
}

}  // extern "C"
