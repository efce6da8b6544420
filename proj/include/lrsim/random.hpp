#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lrsim {

/// Seeded random source: same seed, same draw sequence.
///
/// Draws are mapped from raw mt19937_64 output instead of going through
/// std distributions, so replay does not depend on the standard library's
/// distribution implementations.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform double in [0, 1), 53 bits of precision.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Exponential variate with the given rate (mean 1/rate).
  double exponential(double rate) {
    return -std::log1p(-uniform01()) / rate;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace lrsim
