// Apache License, Version 2.0, refer to LICENSE.txt

#include "simplex_priors/toolkit.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <sstream>

#include "simplex_priors/errors.hpp"
#include "simplex_priors/posterior.hpp"
#include "simplex_priors/empirical_bayes.hpp"

namespace spx::toolkit {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kSchema = "simplex-priors/1";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
std::optional<T> parse_number(std::string_view field) {
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

std::string row_prefix(const std::string& source, std::size_t row) {
  return source + ": row " + std::to_string(row) + ": ";
}

std::string format_double(double v, int digits = 17) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, v);
  return buffer;
}

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, ptr);
}

Json sigma_json(const SigmaEstimate& s) {
  Json j;
  j["kind"] = to_string(s.kind);
  if (s.is_finite()) j["value"] = s.value;
  return j;
}

SigmaEstimate sigma_from_value(double v) {
  if (std::isinf(v) && v > 0.0) return SigmaEstimate::plus_infinity();
  if (v == -1.0) return SigmaEstimate::lower_boundary();
  if (!std::isfinite(v) || v < -1.0) throw DomainError("sigma must lie in [-1, inf]");
  return SigmaEstimate::interior(v);
}

double finite_sigma(const Options& o, const char* context) {
  const double s = o.sigma.value_or(0.0);
  if (!std::isfinite(s)) throw DomainError(std::string(context) + ": sigma must be finite here");
  if (s < -1.0) throw DomainError(std::string(context) + ": sigma must be >= -1");
  return s;
}

DirichletParams required_alpha(const Options& o, std::size_t m, const char* context) {
  if (!o.alpha) throw DomainError(std::string(context) + ": --alpha is required");
  DirichletParams params(*o.alpha);
  if (m != 0) require_same_dimension(params.dimension(), m, context);
  return params;
}

const std::vector<int>& required_r(const Options& o, std::size_t m, const char* context) {
  if (!o.r) throw DomainError(std::string(context) + ": the mixture model needs --r");
  require_same_dimension(o.r->size(), m, context);
  return *o.r;
}

WeightedDirichletModel build_model(const Options& o, const DirichletParams& params, const char* context) {
  switch (o.model) {
    case ModelKind::dirichlet:
      return WeightedDirichletModel::dirichlet(params);
    case ModelKind::selection:
      return WeightedDirichletModel::selection(params, finite_sigma(o, context));
    case ModelKind::mixture:
      return WeightedDirichletModel(params, PolynomialWeight::power_sum(required_r(o, params.dimension(), context)));
  }
  throw DomainError("unknown model kind");
}

Json header(ModelKind kind) {
  Json j;
  j["schema"] = kSchema;
  j["model_kind"] = to_string(kind);
  return j;
}

void add_model_fields(Json& j, const Options& o, const DirichletParams& params) {
  j["alpha"] = std::vector<double>(params.values().begin(), params.values().end());
  if (o.model == ModelKind::selection) j["sigma"] = sigma_json(sigma_from_value(finite_sigma(o, "model")));
  if (o.model == ModelKind::mixture && o.r) j["r"] = *o.r;
}

Json summary_json(const ChainSummary& s) {
  Json j;
  j["retained"] = s.retained;
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["lag1_autocorrelation"] = s.lag1_autocorrelation;
  j["mc_standard_error"] = s.mc_standard_error;
  return j;
}

const FrequencySample& require_frequencies(const Dataset& d, const char* context) {
  if (d.kind != DatasetKind::frequencies || !d.frequencies) {
    throw DomainError(std::string(context) + ": needs a frequency dataset");
  }
  return *d.frequencies;
}

}  // namespace

Dataset ingest(const std::string& path, DatasetKind kind) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  return kind == DatasetKind::frequencies ? parse_frequencies(in, path) : parse_counts(in, path);
}

Dataset parse_frequencies(std::istream& in, const std::string& source) {
  std::vector<SimplexPoint> points;
  std::size_t m = 0;
  std::size_t row = 0;
  bool seen_first = false;
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_fields(text);
    std::vector<double> values;
    values.reserve(fields.size());
    std::optional<std::size_t> bad;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto v = parse_number<double>(fields[i]);
      if (!v) {
        bad = i;
        break;
      }
      values.push_back(*v);
    }
    if (!seen_first) {
      seen_first = true;
      if (bad) {
        m = fields.size();
        continue;  // header
      }
    }
    if (bad) {
      throw DataError(row_prefix(source, row) + "field " + std::to_string(*bad + 1) + " is not a number: '" +
                          std::string(fields[*bad]) + "'",
                      row);
    }
    if (m == 0) m = values.size();
    if (values.size() != m) {
      throw DataError(row_prefix(source, row) + "expected " + std::to_string(m) + " fields, got " +
                          std::to_string(values.size()),
                      row);
    }
    if (m < 2) throw DataError(row_prefix(source, row) + "need at least 2 categories", row);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!std::isfinite(values[i]) || values[i] < 0.0) {
        throw DataError(row_prefix(source, row) + "entry " + std::to_string(i + 1) + " is negative or not finite",
                        row);
      }
      sum += values[i];
    }
    if (std::abs(sum - 1.0) > SimplexPoint::kSumTolerance) {
      throw DataError(row_prefix(source, row) + "frequencies sum to " + format_double(sum, 12) + ", not 1", row);
    }
    points.emplace_back(std::move(values));
  }
  if (points.empty()) throw DataError(source + ": no observations");
  Dataset d;
  d.kind = DatasetKind::frequencies;
  d.m = m;
  d.source_path = source;
  d.frequencies = FrequencySample::allowing_boundary(std::move(points));
  return d;
}

Dataset parse_counts(std::istream& in, const std::string& source) {
  std::optional<std::vector<long>> counts;
  std::size_t row = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (counts) throw DataError(row_prefix(source, row) + "a counts file holds a single line", row);
    const auto fields = split_fields(text);
    std::vector<long> values;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto v = parse_number<long>(fields[i]);
      if (!v) {
        throw DataError(row_prefix(source, row) + "field " + std::to_string(i + 1) + " is not an integer: '" +
                            std::string(fields[i]) + "'",
                        row);
      }
      if (*v < 0) throw DataError(row_prefix(source, row) + "field " + std::to_string(i + 1) + " is negative", row);
      values.push_back(*v);
    }
    if (values.size() < 2) throw DataError(row_prefix(source, row) + "need at least 2 categories", row);
    counts = std::move(values);
  }
  if (!counts) throw DataError(source + ": no counts line");
  Dataset d;
  d.kind = DatasetKind::counts;
  d.m = counts->size();
  d.source_path = source;
  d.counts = CountVector(std::move(*counts));
  return d;
}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::dirichlet:
      return "dirichlet";
    case ModelKind::selection:
      return "selection";
    case ModelKind::mixture:
      return "mixture";
  }
  return "unknown";
}

const char* to_string(SampleMethod method) { return method == SampleMethod::gibbs ? "gibbs" : "rejection"; }

std::vector<double> Grid::points() const {
  if (!(std::isfinite(min) && std::isfinite(max) && std::isfinite(step))) throw DomainError("grid: bounds must be finite");
  if (min < -1.0) throw DomainError("grid: MIN must be >= -1");
  if (!(step > 0.0)) throw DomainError("grid: STEP must be > 0");
  if (max < min) throw DomainError("grid: MAX must be >= MIN");
  const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  if (count > 10'000'000) throw DomainError("grid: too many points");
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = std::max(min, std::round((min + static_cast<double>(k) * step) * 1e12) / 1e12);
  }
  return out;
}

FitReport cmd_fit(const Dataset& dataset, const Options& o) {
  const auto& sample = require_frequencies(dataset, "fit");
  const std::size_t m = sample.dimension();
  FitReport report;
  report.model_kind = o.model;
  report.n_observations = sample.size();
  auto set_alpha = [&](const DirichletParams& p) { report.alpha.assign(p.values().begin(), p.values().end()); };

  switch (o.model) {
    case ModelKind::dirichlet: {
      if (o.alpha) {
        const auto params = required_alpha(o, m, "fit");
        set_alpha(params);
        report.log_likelihood = dirichlet_log_likelihood(sample, params);
      } else {
        const auto fit = dirichlet_mle(FrequencySample(sample.points()));
        set_alpha(fit.alpha);
        report.log_likelihood = fit.log_likelihood;
        report.diagnostics = {{"iterations", fit.iterations}, {"gradient_norm", fit.gradient_norm}};
        report.degenerate = fit.degenerate_concentration;
      }
      break;
    }
    case ModelKind::selection: {
      SigmaEstimate sigma;
      if (o.alpha) {
        const auto params = required_alpha(o, m, "fit");
        set_alpha(params);
        sigma = o.sigma ? sigma_from_value(*o.sigma) : sigma_mle(sample, params);
        report.log_likelihood = selection_log_likelihood(sample, params, sigma);
        if (sigma.is_finite()) report.diagnostics.emplace_back("sigma_score", sigma_score(sample, params, sigma.value));
        report.diagnostics.emplace_back("expected_homozygosity", expected_homozygosity(params));
      } else {
        const FrequencySample interior(sample.points());
        const auto fit = o.sigma ? selection_mle_fixed_sigma(interior, sigma_from_value(*o.sigma))
                                 : selection_mle_joint(interior);
        sigma = fit.sigma;
        set_alpha(fit.alpha);
        report.log_likelihood = fit.log_likelihood;
        report.diagnostics = {{"iterations", fit.iterations},
                              {"gradient_norm", fit.gradient_norm},
                              {"outer_iterations", static_cast<double>(fit.objective_trace.size())},
                              {"expected_homozygosity", expected_homozygosity(fit.alpha)}};
        report.degenerate = fit.degenerate_concentration;
      }
      report.sigma = sigma;
      report.diagnostics.emplace_back("log_likelihood_is_limit", sigma.is_finite() ? 0.0 : 1.0);
      break;
    }
    case ModelKind::mixture: {
      const auto& r = required_r(o, m, "fit");
      report.r = r;
      std::optional<DirichletFit> fit;
      if (!o.alpha) fit = dirichlet_mle(FrequencySample(sample.points()));
      const DirichletParams params = o.alpha ? required_alpha(o, m, "fit") : fit->alpha;
      set_alpha(params);
      const WeightedDirichletModel model(params, PolynomialWeight::power_sum(r));
      double ll = 0.0;
      for (const auto& p : sample.points()) ll += weighted_log_density(model, p);
      report.log_likelihood = ll;
      if (fit) {
        report.diagnostics = {{"iterations", fit->iterations}, {"gradient_norm", fit->gradient_norm}};
        report.degenerate = fit->degenerate_concentration;
      }
      break;
    }
  }
  return report;
}

std::string render(const FitReport& report) {
  Json j = header(report.model_kind);
  j["alpha"] = report.alpha;
  if (report.sigma) j["sigma"] = sigma_json(*report.sigma);
  if (report.r) j["r"] = *report.r;
  j["log_likelihood"] = report.log_likelihood;
  j["n_observations"] = report.n_observations;
  Json diagnostics = Json::object();
  for (const auto& [key, value] : report.diagnostics) diagnostics[key] = value;
  j["diagnostics"] = diagnostics;
  j["degenerate"] = report.degenerate;
  return j.dump(2) + "\n";
}

std::string cmd_posterior(const CountVector& counts, const Options& o) {
  const auto params = required_alpha(o, counts.dimension(), "posterior");
  const auto model = build_model(o, params, "posterior");
  const auto summary = posterior_summary(model, counts);
  const auto updated = params + counts;

  Json j = header(o.model);
  add_model_fields(j, o, params);
  j["counts"] = std::vector<long>(counts.values().begin(), counts.values().end());
  j["posterior_alpha"] = std::vector<double>(updated.values().begin(), updated.values().end());
  j["mean"] = summary.mean;
  Json rows = Json::array();
  for (std::size_t r = 0; r < summary.covariance.n; ++r) {
    std::vector<double> row(summary.covariance.n);
    for (std::size_t c = 0; c < summary.covariance.n; ++c) row[c] = summary.covariance(r, c);
    rows.push_back(row);
  }
  j["covariance"] = rows;
  j["log_normalizer"] = summary.log_normalizer;
  return j.dump(2) + "\n";
}

std::string cmd_eb(const CountVector& counts, const Options& o) {
  const double sigma = finite_sigma(o, "eb");
  if (counts.dimension() != 2 && !o.full_alpha) {
    throw DomainError("eb: the (theta, 1, ..., 1) fit needs m = 2; pass --full-alpha for m > 2");
  }
  const auto result = eb_estimate(counts, sigma, EbOptions{o.full_alpha});

  Json j = header(ModelKind::selection);
  j["sigma"] = sigma_json(sigma_from_value(sigma));
  j["counts"] = std::vector<long>(counts.values().begin(), counts.values().end());
  j["alpha"] = std::vector<double>(result.alpha.values().begin(), result.alpha.values().end());
  if (result.theta) {
    Json theta;
    theta["kind"] = to_string(result.theta->kind);
    if (result.theta->kind == ThetaKind::interior) theta["value"] = result.theta->theta;
    j["theta"] = theta;
  }
  j["log_marginal"] = result.log_marginal;
  j["estimate"] = result.estimate;
  if (result.closed_form_p1) j["closed_form_p1"] = *result.closed_form_p1;
  j["degenerate"] = result.degenerate;
  return j.dump(2) + "\n";
}

SampleOutput cmd_sample(const Options& o) {
  if (o.model == ModelKind::mixture) throw DomainError("sample: supports the dirichlet and selection models");
  const auto params = required_alpha(o, 0, "sample");
  const double sigma = o.model == ModelKind::selection ? finite_sigma(o, "sample") : 0.0;
  const SelectionModel model(params, sigma);

  Json j = header(o.model);
  add_model_fields(j, o, params);
  j["method"] = to_string(o.method);
  j["seed"] = o.seed;

  SampleOutput out;
  if (o.method == SampleMethod::gibbs) {
    ChainConfig config = ChainConfig::with_defaults(o.iterations, o.seed);
    if (o.burn_in) config.burn_in = *o.burn_in;
    config.thin = o.thin;
    auto chain = gibbs_chain(model, config);
    j["iterations"] = config.iterations;
    j["burn_in"] = config.burn_in;
    j["thin"] = config.thin;
    j["degenerate_slices"] = chain.degenerate_slices;
    j["summary"] = summary_json(chain.summary);
    out.draws = std::move(chain.draws);
  } else {
    if (o.iterations == 0) throw DomainError("sample: iterations must be positive");
    auto result = rejection_sample(model, o.iterations, o.seed);
    j["draws"] = o.iterations;
    j["proposals"] = result.proposals;
    j["acceptance_rate"] = result.acceptance_rate;
    j["summary"] = summary_json(result.summary);
    out.draws = std::move(result.draws);
  }
  out.summary_json = j.dump(2) + "\n";
  return out;
}

std::string render_draws(const Draws& draws) {
  std::string text;
  for (std::size_t i = 0; i < draws.dimension; ++i) {
    if (i) text += ',';
    text += 'p' + std::to_string(i + 1);
  }
  text += '\n';
  text.reserve(text.size() + draws.values.size() * 24);
  for (std::size_t k = 0; k < draws.size(); ++k) {
    const auto row = draws.row(k);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += format_double(row[i]);
    }
    text += '\n';
  }
  return text;
}

std::vector<CurveRow> cmd_curve(const Dataset& dataset, const Options& o) {
  const auto& sample = require_frequencies(dataset, "curve");
  const auto params =
      o.alpha ? required_alpha(o, sample.dimension(), "curve") : dirichlet_mle(FrequencySample(sample.points())).alpha;
  std::vector<CurveRow> rows;
  for (double s : o.grid.points()) {
    rows.push_back({s, selection_log_likelihood(sample, params, s), sigma_score(sample, params, s)});
  }
  rows.push_back({std::numeric_limits<double>::infinity(), selection_log_likelihood_limit(sample, params), 0.0});
  return rows;
}

std::string render_curve(const std::vector<CurveRow>& rows) {
  std::string text = "sigma,log_likelihood,score\n";
  for (const auto& r : rows) {
    text += shortest(r.sigma) + ',' + shortest(r.log_likelihood) + ',' + shortest(r.score) + '\n';
  }
  return text;
}

}  // namespace spx::toolkit
