#pragma once

// SplitMix64 (Steele, Lea, Flood 2014). Tiny, splittable, and bit-identical
// on every platform, which is what reproducible stochastic tests need.

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

namespace aperiodica {

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix(z);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Independent stream keyed by a seed and an integer tuple (e.g. lattice coordinates).
  static SplitMix64 stream(std::uint64_t seed, const std::vector<long long>& key) {
    std::uint64_t h = mix(seed ^ 0x6A09E667F3BCC909ULL);
    for (long long k : key) h = mix(h ^ (static_cast<std::uint64_t>(k) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
    return SplitMix64(h);
  }

 private:
  std::uint64_t state_;
};

}  // namespace aperiodica
