// Apache License, Version 2.0, refer to LICENSE.txt

#include "simplex_priors/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "simplex_priors/errors.hpp"

namespace spx {

SimplexPoint::SimplexPoint(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw DomainError("SimplexPoint: dimension must be at least 2");
  double sum = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError("SimplexPoint: entries must be finite and nonnegative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw DomainError("SimplexPoint: entries sum to " + std::to_string(sum) + ", not 1");
  }
  if (sum != 1.0) {
    for (double& v : values_) v /= sum;
  }
  for (double& v : values_) v = std::min(v, 1.0);
}

bool SimplexPoint::interior() const noexcept {
  for (double v : values_) {
    if (v <= 0.0) return false;
  }
  return true;
}

double SimplexPoint::homozygosity() const noexcept {
  double h = 0.0;
  for (double v : values_) h += v * v;
  return h;
}

SimplexPoint SimplexPoint::barycenter(std::size_t m) {
  return SimplexPoint(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

DirichletParams::DirichletParams(std::vector<double> alpha) : alpha_(std::move(alpha)), total_(0.0) {
  if (alpha_.size() < 2) throw DomainError("DirichletParams: dimension must be at least 2");
  for (double a : alpha_) {
    if (!std::isfinite(a) || a <= 0.0) {
      throw DomainError("DirichletParams: every alpha_i must be finite and > 0, got " +
                        std::to_string(a));
    }
    total_ += a;
  }
}

CountVector::CountVector(std::vector<long> counts) : counts_(std::move(counts)), total_(0) {
  if (counts_.empty()) throw DomainError("CountVector: empty");
  for (long c : counts_) {
    if (c < 0) throw DomainError("CountVector: counts must be nonnegative");
    total_ += c;
  }
}

void require_same_dimension(std::size_t a, std::size_t b, const char* context) {
  if (a != b) {
    throw DomainError(std::string(context) + ": dimension mismatch (" + std::to_string(a) +
                      " vs " + std::to_string(b) + ")");
  }
}

DirichletParams operator+(const DirichletParams& alpha, const CountVector& n) {
  require_same_dimension(alpha.dimension(), n.dimension(), "alpha + n");
  std::vector<double> out(alpha.values().begin(), alpha.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += static_cast<double>(n[i]);
  return DirichletParams(std::move(out));
}

}  // namespace spx
