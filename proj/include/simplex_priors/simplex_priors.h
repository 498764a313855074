/* Apache License, Version 2.0, refer to LICENSE.txt */

#ifndef SIMPLEX_PRIORS_H
#define SIMPLEX_PRIORS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SPX_BUILDING_LIBRARY)
#define SPX_API __declspec(dllexport)
#else
#define SPX_API __declspec(dllimport)
#endif
#else
#define SPX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status values double as CLI exit codes. */
typedef enum spx_status {
  SPX_OK = 0,
  SPX_INTERNAL_ERROR = 1,
  SPX_INVALID_ARGUMENT = 2,
  SPX_DATA_ERROR = 3,
  SPX_NUMERICAL_ERROR = 4
} spx_status;

typedef enum spx_model_kind { SPX_MODEL_DIRICHLET = 0, SPX_MODEL_SELECTION = 1, SPX_MODEL_MIXTURE = 2 } spx_model_kind;

typedef enum spx_method { SPX_METHOD_GIBBS = 0, SPX_METHOD_REJECTION = 1 } spx_method;

typedef enum spx_command {
  SPX_COMMAND_FIT = 0,
  SPX_COMMAND_POSTERIOR = 1,
  SPX_COMMAND_EB = 2,
  SPX_COMMAND_SAMPLE = 3,
  SPX_COMMAND_CURVE = 4
} spx_command;

typedef enum spx_sigma_kind {
  SPX_SIGMA_INTERIOR = 0,
  SPX_SIGMA_LOWER_BOUNDARY = 1,
  SPX_SIGMA_PLUS_INFINITY = 2
} spx_sigma_kind;

typedef enum spx_theta_kind { SPX_THETA_ZERO = 0, SPX_THETA_INTERIOR = 1, SPX_THETA_INFINITY = 2 } spx_theta_kind;

typedef struct spx_request spx_request;
typedef struct spx_result spx_result;

SPX_API const char* spx_version(void);

/* Short machine-readable name, e.g. "E_DATA". */
SPX_API const char* spx_status_code(spx_status status);

/* Message of the last failed call on this thread; "" if none. */
SPX_API const char* spx_last_error(void);
/* 1-based input row of the last data error on this thread, 0 if none. */
SPX_API size_t spx_last_error_row(void);

/* Command requests. Setters copy their arguments. */
SPX_API spx_status spx_request_new(spx_request** out);
SPX_API void spx_request_free(spx_request* request);
SPX_API spx_status spx_request_set_model(spx_request* request, spx_model_kind kind);
SPX_API spx_status spx_request_set_input(spx_request* request, const char* path);
SPX_API spx_status spx_request_set_alpha(spx_request* request, const double* alpha, size_t m);
/* INFINITY selects the sigma -> +inf limit where that is meaningful. */
SPX_API spx_status spx_request_set_sigma(spx_request* request, double sigma);
SPX_API spx_status spx_request_set_r(spx_request* request, const int* r, size_t m);
SPX_API spx_status spx_request_set_counts(spx_request* request, const long* counts, size_t m);
SPX_API spx_status spx_request_set_seed(spx_request* request, uint64_t seed);
SPX_API spx_status spx_request_set_iterations(spx_request* request, uint64_t iterations);
SPX_API spx_status spx_request_set_burn_in(spx_request* request, uint64_t burn_in);
SPX_API spx_status spx_request_set_thin(spx_request* request, uint64_t thin);
SPX_API spx_status spx_request_set_method(spx_request* request, spx_method method);
SPX_API spx_status spx_request_set_grid(spx_request* request, double min, double max, double step);
SPX_API spx_status spx_request_set_full_alpha(spx_request* request, int enabled);

/* Runs one command. fit and curve read frequencies from the input path;
   posterior and eb take counts from set_counts or else from the input path. */
SPX_API spx_status spx_run(const spx_request* request, spx_command command, spx_result** out);
/* Report (fit, posterior, eb) or sampling summary as JSON; "" if none. */
SPX_API const char* spx_result_json(const spx_result* result);
/* Draws (sample) or curve rows as CSV; "" if none. */
SPX_API const char* spx_result_csv(const spx_result* result);
SPX_API void spx_result_free(spx_result* result);

/* Direct numerical entry points. Output arrays hold m entries. */
SPX_API spx_status spx_posterior_mean(const double* alpha, const long* counts, size_t m, double sigma, double* mean);
SPX_API spx_status spx_dirichlet_mle(const double* frequencies, size_t rows, size_t m, double* alpha,
                                     double* gradient_norm);
SPX_API spx_status spx_sigma_mle(const double* frequencies, size_t rows, size_t m, const double* alpha,
                                 spx_sigma_kind* kind, double* sigma);
SPX_API spx_status spx_eb_theta(long n1, long n, double sigma, spx_theta_kind* kind, double* theta);
SPX_API spx_status spx_log_marginal(const double* alpha, const long* counts, size_t m, double sigma,
                                    double* log_marginal);

#ifdef __cplusplus
}
#endif

#endif /* SIMPLEX_PRIORS_H */
