// Deterministic randomness for disorder ensembles.
//
// SplitMix64 is used both as the realization-level generator and to derive
// per-realization substreams: substream_seed(master, i) is the i-th output of
// the SplitMix64 stream seeded at `master`, computed in O(1). Doubles are
// drawn as (x >> 11) * 2^-53, so every draw is bit-reproducible across
// platforms (no std::uniform_real_distribution).
#pragma once

#include <cstdint>

namespace rml {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [-a, a).
  double uniform_sym(double a) { return a * (2.0 * uniform01() - 1.0); }

 private:
  std::uint64_t state_;
};

inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 g(master + index * 0x9E3779B97F4A7C15ULL);
  return g.next();
}

}  // namespace rml
