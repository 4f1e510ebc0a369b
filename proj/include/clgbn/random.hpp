#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>

namespace clgbn {

// SplitMix64 finalizer: a bijective 64-bit avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Seed of task `index` under `base_seed`; a pure function of both, so a task
// draws the same numbers whichever thread runs it. Distinct indices never
// collide for a fixed base because the map is a bijection of index.
constexpr std::uint64_t derive_task_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
  return mix64(base_seed ^ (index * kGoldenGamma));
}

// SplitMix64 generator; satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

// The variate helpers below are written out rather than taken from <random>
// so that generated data is identical across standard library implementations.

// Uniform on [0, 1) with 53 random bits.
template <class Rng>
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class Rng>
double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Box-Muller; stateless so each call consumes exactly two draws.
template <class Rng>
double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Index drawn with the given (normalized) probabilities by inversion.
template <class Rng>
std::size_t categorical(Rng& rng, std::span<const double> probabilities) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  for (std::size_t s = 0; s < probabilities.size(); ++s) {
    cumulative += probabilities[s];
    if (u < cumulative) return s;
  }
  // Rounding left the cumulative sum just below u: return the last state with mass.
  for (std::size_t s = probabilities.size(); s-- > 0;) {
    if (probabilities[s] > 0.0) return s;
  }
  return probabilities.size() - 1;
}

}  // namespace clgbn
