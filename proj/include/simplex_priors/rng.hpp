// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <limits>

namespace spx {

/// Counter-based 64-bit generator.
///
/// Draw k of stream s under seed x is
///   mix(mix(k + key0) ^ key1),   key0 = mix(x ^ mix(s + C)),  key1 = mix(key0 + C)
/// where mix is the SplitMix64 finalizer and C = 0x9E3779B97F4A7C15. The
/// output depends only on (seed, stream, counter), so streams are
/// independent of scheduling and platform. Chain j of a run uses stream j.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform on (0, 1).
  double uniform_open01();

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key0_;
  std::uint64_t key1_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace spx
