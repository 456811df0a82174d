#pragma once

#include <cstdint>

namespace svx {

// SplitMix64. Small, fast, and fully specified, so streams are bit-identical
// across platforms and thread schedules.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Index in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// Derives an independent generator for (master seed, stream index). Parallel
// Monte Carlo draws one stream per trial, so results do not depend on thread
// scheduling.
inline SplitMix64 substream(std::uint64_t master_seed, std::uint64_t index) {
  SplitMix64 mixer(master_seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  std::uint64_t s = mixer.next();
  s ^= mixer.next() << 1;
  return SplitMix64(s);
}

}  // namespace svx
