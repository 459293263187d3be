#pragma once

#include <cstdint>

#include "zyg/geometry.hpp"

namespace zyg {

/// SplitMix64: the fixed, portable generator behind every random draw in the
/// laboratory. Consumption is integer-only and the draw order is part of each
/// generator's contract, so (seed, config) reproduces families bit-for-bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, n) by 128-bit multiply-shift (n >= 1). The modulo
  /// bias is below 2^-64 relative and identical on every platform.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Uniform draw in [lo, hi], inclusive.
  Scalar range(Scalar lo, Scalar hi) {
    return lo + static_cast<Scalar>(bounded(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

/// Per-trial stream splitting: trial t draws from SplitMix64 seeded with
/// mix_seed(seed, t); streams are decorrelated by one extra mixing round.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
  return mixer.next();
}

} // namespace zyg
