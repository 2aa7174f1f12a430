#pragma once

#include <cstdint>

namespace quadflip {

/// Counter-based stream: output i is a SplitMix64-style mix of
/// seed + (i+1)*golden. Identical seeds give identical trajectories, and
/// independent streams are obtained by split().
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  explicit RngStream(std::uint64_t s = 0) : seed(s) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    ++counter;
    return mix(seed + counter * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform in [0, n), unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t bound = n == 0 ? 0 : (0 - n) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t x = next();
      if (x >= bound) return x % n;
    }
  }

  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Child stream k, decorrelated from the parent and from other children.
  RngStream split(std::uint64_t k) const {
    return RngStream(mix(seed ^ (0xD1B54A32D192ED03ULL + k * 0x8CB92BA72F3D8DD7ULL)));
  }
};

}  // namespace quadflip
