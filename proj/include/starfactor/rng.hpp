#pragma once

#include <array>
#include <cstdint>

namespace starfactor {

// SplitMix64 step. Used for seeding and for per-sample seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for sample `index` of a run with master seed `master`. Independent of
// the order in which samples are processed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master;
  std::uint64_t mixed = splitmix64(state);
  state = mixed ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
  return splitmix64(state);
}

/// xoshiro256** 1.0 (Blackman & Vigna), state filled by SplitMix64 from a
/// 64-bit seed. All derived draws below (bounded integers, unit doubles,
/// Poisson variates) are implemented here rather than through <random>
/// distributions, so a seed produces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform integer in [0, bound), bound > 0. Lemire's multiply-shift with
  /// rejection, so exactly unbiased.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

 private:
  std::array<std::uint64_t, 4> s_{};
};

// Largest Poisson mean accepted by sample_poisson. Above this the variate no
// longer fits exactly in a double mantissa.
inline constexpr double kMaxPoissonMean = 4.0e15;

/// Poisson(mean) variate. Inversion by sequential search for mean < 10,
/// Hormann's PTRS transformed rejection otherwise, with a cancellation-free
/// log-pmf in the acceptance test. Throws std::domain_error for negative,
/// non-finite, or too large means.
std::uint64_t sample_poisson(Rng& rng, double mean);

// log P(X = k) for X ~ Poisson(mean), accurate for large k and mean.
double poisson_log_pmf(std::uint64_t k, double mean);

}  // namespace starfactor
