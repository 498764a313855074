// Apache License, Version 2.0, refer to LICENSE.txt

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>
#include <unistd.h>

#include "simplex_priors/simplex_priors.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError {
  std::string message;
};

bool use_color() {
  const char* no_color = std::getenv("NO_COLOR");
  if (no_color && *no_color) return false;
  return isatty(STDERR_FILENO) != 0;
}

int report(int exit_code, const char* code, std::string message) {
  for (char& c : message) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  if (use_color()) {
    std::fprintf(stderr, "\033[1;31merror\033[0m %s: %s\n", code, message.c_str());
  } else {
    std::fprintf(stderr, "error %s: %s\n", code, message.c_str());
  }
  return exit_code;
}

template <typename T>
T parse_value(std::string_view text, const std::string& flag) {
  T value{};
  const char* end = text.data() + text.size();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw UsageError{flag + ": cannot parse '" + std::string(text) + "'"};
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& flag) {
  std::vector<T> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    out.push_back(parse_value<T>(std::string_view(text).substr(start, comma - start), flag));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_sigma(const std::string& text) {
  if (text == "inf" || text == "+inf") return INFINITY;
  return parse_value<double>(text, "--sigma");
}

struct Flags {
  std::string input;
  std::string model = "dirichlet";
  std::string alpha;
  std::string sigma;
  std::string r;
  std::string counts;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> iterations;
  std::optional<std::uint64_t> burn_in;
  std::optional<std::uint64_t> thin;
  std::string method = "gibbs";
  std::string output;
  std::string grid;
  bool full_alpha = false;
};

void add_flags(CLI::App* cmd, Flags& f, bool with_chain, bool with_grid) {
  cmd->add_option("--input", f.input, "Input CSV (frequencies, or a counts line)");
  cmd->add_option("--model", f.model, "dirichlet | selection | mixture")
      ->check(CLI::IsMember({"dirichlet", "selection", "mixture"}));
  cmd->add_option("--alpha", f.alpha, "a1,...,am");
  cmd->add_option("--sigma", f.sigma, "Selection strength S or inf");
  cmd->add_option("--r", f.r, "Mixture exponents r1,...,rm");
  cmd->add_option("--counts", f.counts, "n1,...,nm");
  cmd->add_option("--output", f.output, "Output path");
  if (with_chain) {
    cmd->add_option("--seed", f.seed, "Seed (u64)");
    cmd->add_option("--iterations", f.iterations, "Iterations (gibbs) or draws (rejection)");
    cmd->add_option("--burn-in", f.burn_in, "Discarded iterations (default 10%)");
    cmd->add_option("--thin", f.thin, "Keep every k-th iteration");
    cmd->add_option("--method", f.method, "gibbs | rejection")->check(CLI::IsMember({"gibbs", "rejection"}));
  }
  if (with_grid) cmd->add_option("--grid", f.grid, "MIN:MAX:STEP");
}

class Request {
 public:
  Request() {
    if (spx_request_new(&handle_) != SPX_OK) throw std::bad_alloc();
  }
  ~Request() { spx_request_free(handle_); }
  Request(const Request&) = delete;
  Request& operator=(const Request&) = delete;
  spx_request* get() { return handle_; }

 private:
  spx_request* handle_ = nullptr;
};

void check(spx_status status) {
  if (status != SPX_OK) throw status;
}

void configure(Request& req, const Flags& f) {
  spx_request* r = req.get();
  if (!f.input.empty()) check(spx_request_set_input(r, f.input.c_str()));
  const spx_model_kind kind = f.model == "selection" ? SPX_MODEL_SELECTION
                              : f.model == "mixture" ? SPX_MODEL_MIXTURE
                                                     : SPX_MODEL_DIRICHLET;
  check(spx_request_set_model(r, kind));
  if (!f.alpha.empty()) {
    const auto alpha = parse_list<double>(f.alpha, "--alpha");
    check(spx_request_set_alpha(r, alpha.data(), alpha.size()));
  }
  if (!f.sigma.empty()) check(spx_request_set_sigma(r, parse_sigma(f.sigma)));
  if (!f.r.empty()) {
    const auto values = parse_list<int>(f.r, "--r");
    check(spx_request_set_r(r, values.data(), values.size()));
  }
  if (!f.counts.empty()) {
    const auto values = parse_list<long>(f.counts, "--counts");
    check(spx_request_set_counts(r, values.data(), values.size()));
  }
  check(spx_request_set_seed(r, f.seed));
  if (f.iterations) check(spx_request_set_iterations(r, *f.iterations));
  if (f.burn_in) check(spx_request_set_burn_in(r, *f.burn_in));
  if (f.thin) check(spx_request_set_thin(r, *f.thin));
  check(spx_request_set_method(r, f.method == "rejection" ? SPX_METHOD_REJECTION : SPX_METHOD_GIBBS));
  if (!f.grid.empty()) {
    const auto first = f.grid.find(':');
    const auto second = first == std::string::npos ? std::string::npos : f.grid.find(':', first + 1);
    if (second == std::string::npos || f.grid.find(':', second + 1) != std::string::npos) {
      throw UsageError{"--grid: expected MIN:MAX:STEP"};
    }
    const std::string_view g(f.grid);
    check(spx_request_set_grid(r, parse_value<double>(g.substr(0, first), "--grid"),
                               parse_value<double>(g.substr(first + 1, second - first - 1), "--grid"),
                               parse_value<double>(g.substr(second + 1), "--grid")));
  }
  check(spx_request_set_full_alpha(r, f.full_alpha ? 1 : 0));
}

bool write_text(const std::string& path, const char* text) {
  if (path.empty()) {
    std::fputs(text, stdout);
    return std::fflush(stdout) == 0;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conjugate priors on the unit simplex: fitting, posteriors, empirical Bayes and sampling."};
  app.set_version_flag("--version", spx_version());
  app.require_subcommand(1, 1);
  Flags f;
  auto* fit = app.add_subcommand("fit", "Fit a model to a frequency CSV");
  add_flags(fit, f, false, false);
  auto* posterior = app.add_subcommand("posterior", "Posterior mean and covariance for counts");
  add_flags(posterior, f, false, false);
  auto* eb = app.add_subcommand("eb", "Empirical Bayes estimate for counts");
  add_flags(eb, f, false, false);
  eb->add_flag("--full-alpha", f.full_alpha, "Fit every alpha_i instead of (theta, 1, ..., 1)");
  auto* sample = app.add_subcommand("sample", "Draw from a Dirichlet or selection model");
  add_flags(sample, f, true, false);
  auto* curve = app.add_subcommand("curve", "Selection log-likelihood and score over a sigma grid");
  add_flags(curve, f, false, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(kExitUsage, spx_status_code(SPX_INVALID_ARGUMENT), e.what());
  }

  spx_command command = SPX_COMMAND_FIT;
  if (posterior->parsed()) command = SPX_COMMAND_POSTERIOR;
  if (eb->parsed()) command = SPX_COMMAND_EB;
  if (sample->parsed()) command = SPX_COMMAND_SAMPLE;
  if (curve->parsed()) command = SPX_COMMAND_CURVE;
  if (command == SPX_COMMAND_SAMPLE && f.output.empty()) {
    return report(kExitUsage, spx_status_code(SPX_INVALID_ARGUMENT), "sample: --output is required for the draws");
  }

  spx_result* result = nullptr;
  try {
    Request request;
    configure(request, f);
    check(spx_run(request.get(), command, &result));
  } catch (const UsageError& e) {
    return report(kExitUsage, spx_status_code(SPX_INVALID_ARGUMENT), e.message);
  } catch (spx_status status) {
    return report(static_cast<int>(status), spx_status_code(status), spx_last_error());
  }

  bool ok = true;
  if (command == SPX_COMMAND_SAMPLE) {
    ok = write_text(f.output, spx_result_csv(result)) && write_text("", spx_result_json(result));
  } else if (command == SPX_COMMAND_CURVE) {
    ok = write_text(f.output, spx_result_csv(result));
  } else {
    ok = write_text(f.output, spx_result_json(result));
  }
  spx_result_free(result);
  if (!ok) return report(kExitData, "E_IO", "cannot write output '" + f.output + "'");
  return 0;
}
