#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "rankopt/util/check.hpp"

namespace rankopt {

/// Seeded RNG wrapper. std::mt19937_64 output is fully specified by the
/// standard, but the std distributions are not; the helpers below implement
/// the distribution logic explicitly so streams are reproducible across
/// compilers and standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound) via rejection sampling.
  uint64_t next_below(uint64_t bound) {
    check(bound > 0, "rng: bound must be positive");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t value = engine_();
    while (value >= limit) {
      value = engine_();
    }
    return value % bound;
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  int next_int(int lo, int hi_inclusive) {
    check(hi_inclusive >= lo, "rng: empty integer range");
    return lo + static_cast<int>(next_below(static_cast<uint64_t>(hi_inclusive - lo) + 1));
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(next_below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  /// Index drawn proportionally to the given non-negative weights.
  size_t next_weighted(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
};

/// Splits `total` items over `weights.size()` cells so that counts are exactly
/// proportional up to rounding (largest-remainder apportionment, ties to the
/// lower index). Used by the data generator to make per-value frequencies
/// match the target distribution by construction.
std::vector<uint64_t> apportion(uint64_t total, const std::vector<double>& weights);

/// Zipf weights over [0, n): w_i = (i + 1)^-s. s = 0 is uniform.
std::vector<double> zipf_weights(size_t n, double s);

}  // namespace rankopt
