#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hcm {

using Rng = std::mt19937_64;

// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Child seed for stream `index` of `master`:
//   mix64(master XOR mix64(index * G + G)),  G = 0x9E3779B97F4A7C15.
// For fixed master the map index -> seed is a composition of bijections, so
// distinct indices never collide.
constexpr std::uint64_t seed_stream(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index * kGolden + kGolden));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t index) {
  return Rng(seed_stream(master, index));
}

// Uniform in (0, 1) built from the top 52 bits of a 64-bit word; the
// extremes 2^-53 and 1 - 2^-53 are exact doubles.
constexpr double word_to_open_unit(std::uint64_t w) {
  return (static_cast<double>(w >> 12) + 0.5) * 0x1.0p-52;
}

inline double uniform01(Rng& rng) { return word_to_open_unit(rng()); }

inline double exponential(Rng& rng, double rate) {
  return -std::log(uniform01(rng)) / rate;
}

// Index uniform on [0, bound) without modulo bias.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t w = rng();
  while (w >= limit) w = rng();
  return w % bound;
}

}  // namespace hcm
