#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace spinsim::rng {

/// splitmix64 output stage; bijective on 64-bit words.
constexpr std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Collapses (seed, a, b) into one well-mixed 64-bit key. Used to derive
/// independent counter-based streams; identical inputs always give identical
/// keys, which is what makes the noise channels replayable.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                               std::uint64_t b = 0) {
  return mix(mix(mix(seed) ^ a) ^ b);
}

/// Minimal keyed generator (splitmix64). Cheap to construct per key, so a
/// fresh one is made for every (seed, step, bond) tuple.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t key) : state_(key) {}
  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(SplitMix64& g) {
  return static_cast<double>(g.next() >> 11) * 0x1.0p-53;
}

/// Uniform double in [-half_width, half_width].
inline double uniform_sym(SplitMix64& g, double half_width) {
  return half_width * (2.0 * uniform01(g) - 1.0);
}

/// Standard normal via Box-Muller; consumes two uniforms.
inline double gaussian(SplitMix64& g) {
  double u1 = uniform01(g);
  if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;  // keep log finite
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace spinsim::rng
