#pragma once

#include <cstdint>
#include <string_view>

namespace rankopt {

inline constexpr uint64_t kFnvOffset = 14695981039346656037ull;
inline constexpr uint64_t kFnvPrime = 1099511628211ull;

constexpr uint64_t fnv1a64(std::string_view data, uint64_t hash = kFnvOffset) {
  for (const char c : data) {
    hash ^= static_cast<uint8_t>(c);
    hash *= kFnvPrime;
  }
  return hash;
}

constexpr uint64_t fnv1a64_mix(uint64_t value, uint64_t hash) {
  for (int i = 0; i < 8; ++i) {
    hash ^= (value >> (8 * i)) & 0xff;
    hash *= kFnvPrime;
  }
  return hash;
}

/// Deterministic hash of (key, seed) to [0, 1). Drives the idle-resource
/// sampling rule so that the set of sampled keys is monotone in the fraction.
inline double hash_to_unit(std::string_view key, uint64_t seed) {
  const uint64_t h = fnv1a64(key, fnv1a64_mix(seed, kFnvOffset));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace rankopt
