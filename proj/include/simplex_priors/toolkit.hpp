// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "simplex_priors/mle.hpp"
#include "simplex_priors/sampler.hpp"

namespace spx::toolkit {

enum class DatasetKind { frequencies, counts };

struct Dataset {
  DatasetKind kind = DatasetKind::frequencies;
  std::optional<FrequencySample> frequencies;
  std::optional<CountVector> counts;
  std::string source_path;
  std::size_t m = 0;
};

/// Reads a frequency CSV (optional header, one observation per line) or a
/// single-line counts file. Errors are DataError with the 1-based line number.
Dataset ingest(const std::string& path, DatasetKind kind);
Dataset parse_frequencies(std::istream& in, const std::string& source);
Dataset parse_counts(std::istream& in, const std::string& source);

enum class ModelKind { dirichlet, selection, mixture };
enum class SampleMethod { gibbs, rejection };

const char* to_string(ModelKind kind);
const char* to_string(SampleMethod method);

struct Grid {
  double min = -1.0;
  double max = 5.0;
  double step = 0.1;

  std::vector<double> points() const;
};

/// Everything a command may read. Unset optionals mean "not given".
struct Options {
  ModelKind model = ModelKind::dirichlet;
  std::optional<std::vector<double>> alpha;
  std::optional<double> sigma;  // +inf allowed where the limiting model is meaningful
  std::optional<std::vector<int>> r;
  std::optional<std::vector<long>> counts;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 1000;
  std::optional<std::uint64_t> burn_in;  // default: 10% of iterations
  std::uint64_t thin = 1;
  SampleMethod method = SampleMethod::gibbs;
  Grid grid;
  bool full_alpha = false;
};

struct FitReport {
  ModelKind model_kind = ModelKind::dirichlet;
  std::vector<double> alpha;
  std::optional<SigmaEstimate> sigma;
  std::optional<std::vector<int>> r;
  double log_likelihood = 0.0;
  std::size_t n_observations = 0;
  std::vector<std::pair<std::string, double>> diagnostics;
  bool degenerate = false;
};

FitReport cmd_fit(const Dataset& dataset, const Options& options);
std::string render(const FitReport& report);

/// JSON with the posterior parameters, mean, covariance and ln E_{alpha+n}[g].
std::string cmd_posterior(const CountVector& counts, const Options& options);

/// JSON with the fitted theta (or alpha), marginal, plug-in estimate and flags.
std::string cmd_eb(const CountVector& counts, const Options& options);

struct SampleOutput {
  Draws draws;
  std::string summary_json;
};

SampleOutput cmd_sample(const Options& options);
/// Header p1..pm, one draw per line, 17 significant digits.
std::string render_draws(const Draws& draws);

struct CurveRow {
  double sigma;  // +inf for the limiting row
  double log_likelihood;
  double score;
};

/// One row per grid point, then the sigma -> +inf row. Uses the fitted
/// Dirichlet alpha when none is given.
std::vector<CurveRow> cmd_curve(const Dataset& dataset, const Options& options);
std::string render_curve(const std::vector<CurveRow>& rows);

}  // namespace spx::toolkit
