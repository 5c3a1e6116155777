#pragma once

#include <cstdint>

namespace subcurv {

// Deterministic RNG with a fixed u64 -> double mapping. std::uniform_real_
// distribution is implementation-defined, which would break byte-identical
// reports across platforms; this is splitmix64.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Derive an independent stream, e.g. per sample point: deterministic
  // regardless of thread schedule.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0x517cc1b727220a95ull * (index + 1)));
    mix.next_u64();
    return mix;
  }

private:
  std::uint64_t state_;
};

}  // namespace subcurv
