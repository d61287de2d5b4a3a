#pragma once

#include <cstdint>

namespace termtk {

/// splitmix64. Counter-based: output i is a pure mix of seed + i*gamma, so a
/// stream derived from (seed, line_index) is reproducible regardless of how
/// lines are sharded across workers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), n > 0. Multiply-shift, no rejection loop.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Per-sentence stream: seed xor line_index, fully mixed by splitmix64.
inline SplitMix64 line_rng(std::uint64_t seed, std::uint64_t line_index) {
  return SplitMix64(seed ^ line_index);
}

}  // namespace termtk
