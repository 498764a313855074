/* Apache License, Version 2.0, refer to LICENSE.txt */

/* Compiled as C to check that the public header is valid C and links. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "simplex_priors/simplex_priors.h"

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                  \
    }                                                            \
  } while (0)

int main(void) {
  const double alpha[2] = {1.0, 1.0};
  const long counts[2] = {1, 0};
  double mean[2];
  spx_request* request = NULL;
  spx_result* result = NULL;

  CHECK(strlen(spx_version()) > 0);
  CHECK(spx_posterior_mean(alpha, counts, 2, -1.0, mean) == SPX_OK);
  CHECK(fabs(mean[0] - 0.6) < 1e-12 && fabs(mean[1] - 0.4) < 1e-12);

  CHECK(spx_posterior_mean(alpha, counts, 2, -2.0, mean) == SPX_INVALID_ARGUMENT);
  CHECK(strcmp(spx_status_code(SPX_INVALID_ARGUMENT), "E_USAGE") == 0);
  CHECK(strlen(spx_last_error()) > 0);

  CHECK(spx_request_new(&request) == SPX_OK);
  CHECK(spx_request_set_alpha(request, alpha, 2) == SPX_OK);
  CHECK(spx_request_set_counts(request, counts, 2) == SPX_OK);
  CHECK(spx_run(request, SPX_COMMAND_POSTERIOR, &result) == SPX_OK);
  CHECK(strstr(spx_result_json(result), "\"schema\"") != NULL);
  spx_result_free(result);
  spx_request_free(request);
  return 0;
}
