// Apache License, Version 2.0, refer to LICENSE.txt

// Exercises the shared library through its C interface only.

#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <limits>
#include <memory>
#include <string>

#include "simplex_priors/simplex_priors.h"

using Json = nlohmann::ordered_json;

namespace {

std::string fixture(const std::string& name) { return std::string(SPX_FIXTURE_DIR) + "/" + name; }

struct RequestDeleter {
  void operator()(spx_request* r) const { spx_request_free(r); }
};
struct ResultDeleter {
  void operator()(spx_result* r) const { spx_result_free(r); }
};
using Request = std::unique_ptr<spx_request, RequestDeleter>;
using Result = std::unique_ptr<spx_result, ResultDeleter>;

Request new_request() {
  spx_request* raw = nullptr;
  EXPECT_EQ(spx_request_new(&raw), SPX_OK);
  return Request(raw);
}

spx_status run(const Request& request, spx_command command, Result& out) {
  spx_result* raw = nullptr;
  const auto status = spx_run(request.get(), command, &raw);
  out.reset(raw);
  return status;
}

}  // namespace

TEST(CApi, StatusCodes) {
  EXPECT_STREQ(spx_status_code(SPX_OK), "OK");
  EXPECT_STREQ(spx_status_code(SPX_INVALID_ARGUMENT), "E_USAGE");
  EXPECT_STREQ(spx_status_code(SPX_DATA_ERROR), "E_DATA");
  EXPECT_STREQ(spx_status_code(SPX_NUMERICAL_ERROR), "E_NUMERICAL");
  EXPECT_STREQ(spx_status_code(SPX_INTERNAL_ERROR), "E_INTERNAL");
  EXPECT_GT(std::string(spx_version()).size(), 0u);
}

TEST(CApi, DirectEntryPoints) {
  const double alpha[] = {1.0, 1.0};
  const long counts[] = {1, 0};
  double mean[2];
  ASSERT_EQ(spx_posterior_mean(alpha, counts, 2, -1.0, mean), SPX_OK);
  EXPECT_NEAR(mean[0], 0.6, 1e-12);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(spx_posterior_mean(alpha, counts, 2, nan, mean), SPX_INVALID_ARGUMENT);
  EXPECT_EQ(spx_posterior_mean(nullptr, counts, 2, 0.0, mean), SPX_INVALID_ARGUMENT);

  const double p = 0.05278640450004207;
  const double rows[] = {0.5, 0.5, p, 1.0 - p};
  spx_sigma_kind kind;
  double sigma = 0.0;
  ASSERT_EQ(spx_sigma_mle(rows, 2, 2, alpha, &kind, &sigma), SPX_OK);
  EXPECT_EQ(kind, SPX_SIGMA_INTERIOR);
  EXPECT_NEAR(sigma, 2.0, 1e-8);
  const double vertices[] = {1.0, 0.0, 0.0, 1.0};
  ASSERT_EQ(spx_sigma_mle(vertices, 2, 2, alpha, &kind, &sigma), SPX_OK);
  EXPECT_EQ(kind, SPX_SIGMA_PLUS_INFINITY);

  spx_theta_kind tk;
  double theta = 0.0;
  ASSERT_EQ(spx_eb_theta(0, 5, 0.0, &tk, &theta), SPX_OK);
  EXPECT_EQ(tk, SPX_THETA_ZERO);
  ASSERT_EQ(spx_eb_theta(5, 5, 0.0, &tk, &theta), SPX_OK);
  EXPECT_EQ(tk, SPX_THETA_INFINITY);
  ASSERT_EQ(spx_eb_theta(3, 10, 0.0, &tk, &theta), SPX_OK);
  EXPECT_EQ(tk, SPX_THETA_INTERIOR);
  EXPECT_GT(theta, 0.0);
  EXPECT_EQ(spx_eb_theta(6, 5, 0.0, &tk, &theta), SPX_INVALID_ARGUMENT);

  double lm = 0.0;
  const long uniform_counts[] = {2, 1};
  ASSERT_EQ(spx_log_marginal(alpha, uniform_counts, 2, 0.0, &lm), SPX_OK);
  // Ordered sequence under a uniform prior: 2! 1! / 4! = 1/12.
  EXPECT_NEAR(lm, std::log(1.0 / 12.0), 1e-13);

  const double samples[] = {0.2, 0.3, 0.5, 0.1, 0.6, 0.3, 0.4, 0.4, 0.2, 0.3, 0.3, 0.4};
  double fitted[3];
  double gnorm = 1.0;
  ASSERT_EQ(spx_dirichlet_mle(samples, 4, 3, fitted, &gnorm), SPX_OK);
  EXPECT_LT(gnorm, 1e-8);
  const double boundary[] = {1.0, 0.0, 0.0, 0.5, 0.5, 0.0};
  EXPECT_NE(spx_dirichlet_mle(boundary, 2, 3, fitted, &gnorm), SPX_OK);
}

TEST(CApi, RunCommands) {
  auto request = new_request();
  Result result;
  ASSERT_EQ(spx_request_set_input(request.get(), fixture("frequencies_m3.csv").c_str()), SPX_OK);
  ASSERT_EQ(run(request, SPX_COMMAND_FIT, result), SPX_OK) << spx_last_error();
  auto j = Json::parse(spx_result_json(result.get()));
  EXPECT_EQ(j["schema"], "simplex-priors/1");
  EXPECT_EQ(j["n_observations"], 22);
  EXPECT_STREQ(spx_result_csv(result.get()), "");

  ASSERT_EQ(spx_request_set_model(request.get(), SPX_MODEL_SELECTION), SPX_OK);
  ASSERT_EQ(run(request, SPX_COMMAND_FIT, result), SPX_OK) << spx_last_error();
  j = Json::parse(spx_result_json(result.get()));
  EXPECT_TRUE(j["sigma"].contains("kind"));

  ASSERT_EQ(run(request, SPX_COMMAND_CURVE, result), SPX_OK) << spx_last_error();
  EXPECT_EQ(std::string(spx_result_csv(result.get())).rfind("sigma,log_likelihood,score\n", 0), 0u);

  auto counts = new_request();
  const double alpha[] = {1.0, 1.0};
  ASSERT_EQ(spx_request_set_input(counts.get(), fixture("counts_3_1.txt").c_str()), SPX_OK);
  ASSERT_EQ(spx_request_set_alpha(counts.get(), alpha, 2), SPX_OK);
  ASSERT_EQ(run(counts, SPX_COMMAND_POSTERIOR, result), SPX_OK) << spx_last_error();
  j = Json::parse(spx_result_json(result.get()));
  EXPECT_NEAR(j["mean"][0].get<double>(), 2.0 / 3.0, 1e-15);
  ASSERT_EQ(run(counts, SPX_COMMAND_EB, result), SPX_OK) << spx_last_error();

  auto sample = new_request();
  const double a3[] = {2.0, 3.0, 4.0};
  ASSERT_EQ(spx_request_set_alpha(sample.get(), a3, 3), SPX_OK);
  ASSERT_EQ(spx_request_set_seed(sample.get(), 42), SPX_OK);
  ASSERT_EQ(spx_request_set_iterations(sample.get(), 500), SPX_OK);
  ASSERT_EQ(run(sample, SPX_COMMAND_SAMPLE, result), SPX_OK) << spx_last_error();
  const std::string first = spx_result_csv(result.get());
  ASSERT_EQ(run(sample, SPX_COMMAND_SAMPLE, result), SPX_OK);
  EXPECT_EQ(first, spx_result_csv(result.get()));
  EXPECT_EQ(first.rfind("p1,p2,p3\n", 0), 0u);
}

TEST(CApi, ErrorsCarryStatusAndRow) {
  auto request = new_request();
  Result result;
  ASSERT_EQ(spx_request_set_input(request.get(), fixture("bad_sum.csv").c_str()), SPX_OK);
  EXPECT_EQ(run(request, SPX_COMMAND_FIT, result), SPX_DATA_ERROR);
  EXPECT_EQ(result, nullptr);
  EXPECT_EQ(spx_last_error_row(), 3u);
  EXPECT_NE(std::string(spx_last_error()).find("row 3"), std::string::npos);

  auto empty = new_request();
  EXPECT_EQ(run(empty, SPX_COMMAND_FIT, result), SPX_INVALID_ARGUMENT);
  EXPECT_EQ(spx_request_set_sigma(empty.get(), -1.5), SPX_INVALID_ARGUMENT);
  EXPECT_EQ(spx_request_set_sigma(empty.get(), std::numeric_limits<double>::quiet_NaN()), SPX_INVALID_ARGUMENT);
  EXPECT_EQ(spx_request_set_thin(nullptr, 1), SPX_INVALID_ARGUMENT);
}
