// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace driftwatch {

// Pinned 64-bit generator (splitmix64). All randomness in the project flows
// through this so that fixtures are reproducible across platforms and
// languages: the stream is fully determined by the 64-bit seed.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1): 53-bit mantissa, offset by half an ulp so the value
  // is never exactly 0 (safe as a log argument).
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) by rejection-free 128-bit multiply.
  uint64_t next_below(uint64_t bound) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  // Standard normal via Box-Muller (cosine branch only, one draw per pair of
  // uniforms; the sine branch is discarded to keep the counter discipline
  // trivial).
  double next_gaussian() {
    double u1 = next_unit();
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  uint64_t state_;
};

// Stateless mix of a seed with a counter, used to derive independent
// sub-streams (one per observation index, scenario segment, feature, ...).
inline uint64_t sub_seed(uint64_t seed, uint64_t counter) {
  SplitMix64 mixer(seed ^ (0xA0761D6478BD642FULL * (counter + 1)));
  return mixer.next_u64();
}

}  // namespace driftwatch
