#pragma once

#include <cstdint>

namespace cbm {

// splitmix64 (Steele/Lea/Vigna): a counter advanced by the golden-ratio
// increment, output passed through a 64-bit finalizer. Chosen because the
// algorithm is fully specified by these few lines, so a fixed seed yields
// byte-identical streams on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

  // Uniform in {0, ..., n-1} for small n.
  std::uint64_t below(std::uint64_t n) {
    auto v = std::uint64_t(uniform01() * double(n));
    return v < n ? v : n - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace cbm
