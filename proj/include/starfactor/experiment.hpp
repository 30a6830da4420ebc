#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "starfactor/bigint.hpp"
#include "starfactor/pairing.hpp"

namespace starfactor::experiment {

enum class Mode { monte_carlo, exhaustive };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);  // "monte-carlo" | "exhaustive"

struct ExperimentConfig {
  int n = 8;
  int d = 4;
  std::uint64_t samples = 10000;
  int kmax = 4;
  std::uint64_t seed = 1;
  Mode mode = Mode::monte_carlo;
  unsigned threads = 1;
  bool count_factors = true;  // off for cycle-only runs at large n
  std::size_t point_cap = kDefaultEnumerationCap;
  int bootstrap_resamples = 1000;
};

/// Throws std::invalid_argument for an unusable configuration (d < 4, n not a
/// multiple of 4 when counting factors, d n odd, kmax < 1, no samples) and
/// std::length_error for an exhaustive run above the point cap.
void validate(const ExperimentConfig& config);

struct Statistic {
  std::string name;
  int k = 0;  // cycle length, 0 when not applicable
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::optional<double> theory;
  std::optional<double> z;
  bool asserted = false;  // the theory value is exact, so z is checked
  std::string note;
};

struct SampleRecord {
  BigCount factors;
  std::vector<BigCount> cycles;  // X_1..X_kmax
};

struct JointMomentRow {
  int k = 0;
  bool defined = false;  // false when every sampled Y* is zero
  double ratio = 0.0;    // sum Y* X_k / sum Y*
  double stderr_ = 0.0;  // bootstrap; zero for exhaustive runs
  double theory = 0.0;   // lambda_k (1 + delta_k)
  std::optional<double> z;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::uint64_t samples = 0;
  std::vector<Statistic> statistics;
  std::vector<SampleRecord> records;  // Monte Carlo only

  // Exact sums over all samples.
  BigCount sum_factors;
  BigCount sum_factors_squared;
  std::vector<BigCount> sum_factors_cycles;  // index k-1
  std::optional<Rational> theory_mean_factors;  // exact E Y*
  std::optional<BigCount> theory_incidences;    // exhaustive: |Omega| E Y*

  bool checks_passed = true;
  std::vector<std::string> failures;

  std::string timestamp;
  double wall_seconds = 0.0;

  Rational exact_mean_factors() const;
  Rational exact_mean_factors_squared() const;
  const Statistic* find(const std::string& name, int k = 0) const;
};

ExperimentReport run(const ExperimentConfig& config);

/// Ratio estimates E(Y* X_k) / E Y* next to lambda_k (1 + delta_k), with
/// bootstrap standard errors for Monte Carlo runs.
std::vector<JointMomentRow> joint_moment_table(const ExperimentReport& report);

std::vector<JointMomentRow> joint_moment_sweep(int d, int n, std::uint64_t samples, int kmax, std::uint64_t seed,
                                               unsigned threads = 1);

}  // namespace starfactor::experiment
