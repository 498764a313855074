// Apache License, Version 2.0, refer to LICENSE.txt

#include "simplex_priors/rng.hpp"

namespace spx {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key0_(mix64(seed ^ mix64(stream + kGolden))), key1_(mix64(key0_ + kGolden)) {}

CounterRng::result_type CounterRng::operator()() {
  return mix64(mix64(counter_++ + key0_) ^ key1_);
}

double CounterRng::uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double CounterRng::uniform_open01() {
  for (;;) {
    const double u = uniform01();
    if (u > 0.0) return u;
  }
}

}  // namespace spx
