#pragma once

#include <cstdint>
#include <random>

namespace k2t {

/// Seedable generator with a fixed, documented stream:
///  - the seed is mixed once through splitmix64 and fed to mt19937_64;
///  - uniform() = (next() >> 11) * 2^-53, i.e. 53 random mantissa bits in [0,1);
///  - below(n) uses rejection sampling on next() so it is unbiased.
/// std distributions are avoided because their output is implementation
/// defined; this class gives the same sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  static constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace k2t
