#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace geks::rng {

// Counter-based generator: output k of a stream with a given seed is
// splitmix64's k-th value, i.e. mix64(seed + (k+1) * golden-gamma). Being a
// pure function of (seed, counter), streams replay identically on any
// platform and replicates can be seeded by index. Reference vectors for
// seed 0 are pinned in the test suite.
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
  return mix64(seed + (counter + 1) * kGoldenGamma);
}

// Seed for a child stream (replicate index, purpose tag, ...).
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
  return at(seed, index);
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return at(seed_, counter_++); }

  // Uniform on [0, 1), 53-bit resolution.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; used where log(u) must stay finite.
  double next_uniform_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Box-Muller, cosine branch only; consumes exactly two outputs.
  double next_normal() {
    const double u1 = next_uniform_open();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  bool next_bernoulli(double p) { return next_uniform() < p; }

  // Dosage in {0, 1, 2}; always consumes exactly two outputs.
  int next_binomial2(double p) {
    const int a = next_bernoulli(p) ? 1 : 0;
    const int b = next_bernoulli(p) ? 1 : 0;
    return a + b;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace geks::rng
