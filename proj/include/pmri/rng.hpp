#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pmri {

// SplitMix64 used as a counter-based generator: draw i is mix(seed + (i+1)*gamma).
// Every random quantity in the library comes from here, so results do not depend
// on the standard library's distribution implementations.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t next() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform integer in [0, bound) by rejection, no modulo bias.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    // 2^64 - threshold is a multiple of bound.
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t v = next();
    while (v < threshold) v = next();
    return v % bound;
  }

  // Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; consumes two draws.
  double normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace pmri
