#include "starfactor/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <stdexcept>

#include "starfactor/cycle_census.hpp"
#include "starfactor/factor_count.hpp"
#include "starfactor/parallel.hpp"
#include "starfactor/rng.hpp"
#include "starfactor/theory.hpp"

namespace starfactor::experiment {
namespace {

constexpr std::uint64_t kBootstrapStream = 0xB00757A9ULL;

struct Accumulator {
  std::uint64_t count = 0;
  BigCount sum = 0;
  BigCount sum_squares = 0;

  void add(const BigCount& v) {
    ++count;
    sum += v;
    sum_squares += v * v;
  }
  Rational mean() const { return Rational(sum, count); }
  double standard_error() const {
    if (count < 2) return 0.0;
    const Rational n(count);
    const Rational variance = (Rational(sum_squares) - Rational(sum) * Rational(sum) / n) / (n - 1);
    return std::sqrt(std::max(0.0, to_double(variance / n)));
  }
};

SampleRecord measure(const MultiGraph& g, const ExperimentConfig& config) {
  SampleRecord record;
  if (config.count_factors) record.factors = count_3star_factors(g).value;
  record.cycles = census(g, static_cast<std::uint32_t>(config.kmax)).counts;
  return record;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

Statistic make(std::string name, int k, const Accumulator& acc, bool exhaustive) {
  Statistic s;
  s.name = std::move(name);
  s.k = k;
  s.estimate = to_double(acc.mean());
  s.stderr_ = exhaustive ? 0.0 : acc.standard_error();
  return s;
}

void attach(Statistic& s, double theory, bool exact) {
  s.theory = theory;
  s.asserted = exact;
  if (s.stderr_ > 0.0) s.z = (s.estimate - theory) / s.stderr_;
  s.note = exact ? "exact" : "asymptotic, not asserted";
}

// Bootstrap standard deviation of statistic(indices) over resamples; draws
// for which the statistic is undefined are skipped.
template <typename Fn>
double bootstrap(std::size_t samples, int resamples, std::uint64_t seed, Fn&& statistic) {
  Rng rng(seed);
  std::vector<std::size_t> picks(samples);
  double sum = 0.0, sum_squares = 0.0;
  int used = 0;
  for (int b = 0; b < resamples; ++b) {
    for (auto& i : picks) i = rng.uniform_below(samples);
    const auto value = statistic(picks);
    if (!value) continue;
    sum += *value;
    sum_squares += *value * *value;
    ++used;
  }
  if (used < 2) return 0.0;
  const double mean = sum / used;
  return std::sqrt(std::max(0.0, (sum_squares - used * mean * mean) / (used - 1)));
}

}  // namespace

std::string to_string(Mode mode) { return mode == Mode::exhaustive ? "exhaustive" : "monte-carlo"; }

Mode parse_mode(const std::string& text) {
  if (text == "monte-carlo") return Mode::monte_carlo;
  if (text == "exhaustive") return Mode::exhaustive;
  throw std::invalid_argument("unknown mode '" + text + "' (expected monte-carlo or exhaustive)");
}

void validate(const ExperimentConfig& config) {
  if (config.d < theory::kMinDegree) throw std::invalid_argument("d must be at least 4");
  if (config.n < 1) throw std::invalid_argument("n must be positive");
  if ((static_cast<long long>(config.n) * config.d) % 2 != 0) throw std::invalid_argument("d*n must be even");
  if (config.count_factors && config.n % 4 != 0)
    throw std::invalid_argument("n must be a multiple of 4 for factor experiments");
  if (config.kmax < 1) throw std::invalid_argument("kmax must be at least 1");
  if (config.mode == Mode::monte_carlo && config.samples < 1) throw std::invalid_argument("samples must be positive");
  if (config.mode == Mode::exhaustive &&
      static_cast<std::size_t>(config.n) * static_cast<std::size_t>(config.d) > config.point_cap)
    throw std::length_error("exhaustive mode needs d*n <= " + std::to_string(config.point_cap));
}

Rational ExperimentReport::exact_mean_factors() const { return Rational(sum_factors, samples); }
Rational ExperimentReport::exact_mean_factors_squared() const { return Rational(sum_factors_squared, samples); }

const Statistic* ExperimentReport::find(const std::string& name, int k) const {
  for (const auto& s : statistics)
    if (s.name == name && s.k == k) return &s;
  return nullptr;
}

ExperimentReport run(const ExperimentConfig& config) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();
  const bool exhaustive = config.mode == Mode::exhaustive;
  const auto kmax = static_cast<std::size_t>(config.kmax);
  const PairingSpace space(static_cast<std::uint32_t>(config.n), static_cast<std::uint32_t>(config.d));

  ExperimentReport report;
  report.config = config;
  report.timestamp = utc_timestamp();

  Accumulator factors, factors_squared;
  std::vector<Accumulator> cycles(kmax), falling(kmax), joint(kmax);
  auto add = [&](const SampleRecord& r) {
    factors.add(r.factors);
    factors_squared.add(r.factors * r.factors);
    for (std::size_t k = 0; k < kmax; ++k) {
      const BigCount& x = r.cycles[k];
      cycles[k].add(x);
      falling[k].add(x == 0 ? BigCount(0) : x * (x - 1));
      joint[k].add(r.factors * x);
    }
  };

  if (exhaustive) {
    enumerate_all(space, [&](const Pairing& p) { add(measure(project(space, p), config)); }, config.point_cap);
  } else {
    report.records.resize(config.samples);
    parallel_for(report.records.size(), config.threads, [&](std::size_t i) {
      report.records[i] = measure(project(space, sample_uniform(space, derive_seed(config.seed, i))), config);
    });
    for (const auto& r : report.records) add(r);
  }

  report.samples = factors.count;
  report.sum_factors = factors.sum;
  report.sum_factors_squared = factors_squared.sum;
  for (const auto& j : joint) report.sum_factors_cycles.push_back(j.sum);

  if (config.count_factors) {
    report.theory_mean_factors = theory::expected_factors_exact(config.n, config.d);
    const double expected = to_double(*report.theory_mean_factors);

    Statistic mean = make("mean_Y", 0, factors, exhaustive);
    attach(mean, expected, true);
    report.statistics.push_back(mean);

    Statistic second = make("mean_Y2", 0, factors_squared, exhaustive);
    attach(second, theory::variance_ratio(config.d) * expected * expected, false);
    report.statistics.push_back(second);

    Statistic ratio;
    ratio.name = "second_moment_ratio";
    if (factors.sum != 0) {
      ratio.estimate = to_double(Rational(factors_squared.sum * factors.count, factors.sum * factors.sum));
      if (!exhaustive) {
        std::vector<double> y(report.records.size());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = to_double(report.records[i].factors);
        ratio.stderr_ = bootstrap(y.size(), config.bootstrap_resamples, derive_seed(config.seed ^ kBootstrapStream, 0),
                                  [&](const std::vector<std::size_t>& picks) -> std::optional<double> {
                                    double s1 = 0, s2 = 0;
                                    for (auto i : picks) {
                                      s1 += y[i];
                                      s2 += y[i] * y[i];
                                    }
                                    if (s1 == 0) return std::nullopt;
                                    return s2 * static_cast<double>(picks.size()) / (s1 * s1);
                                  });
      }
      attach(ratio, theory::variance_ratio(config.d), false);
    } else {
      ratio.note = "undefined: every sample has Y* = 0";
    }
    report.statistics.push_back(ratio);
  }

  for (std::size_t k = 0; k < kmax; ++k) {
    const int length = static_cast<int>(k + 1);
    const double lambda = theory::lambda(config.d, length);
    Statistic x = make("mean_X", length, cycles[k], exhaustive);
    attach(x, lambda, false);
    report.statistics.push_back(x);
    Statistic f = make("mean_X_falling2", length, falling[k], exhaustive);
    attach(f, lambda * lambda, false);
    report.statistics.push_back(f);
    if (config.count_factors) {
      Statistic yx = make("mean_YX", length, joint[k], exhaustive);
      attach(yx, theory::rel_joint_moment(config.d, length) * to_double(*report.theory_mean_factors), false);
      report.statistics.push_back(yx);
    }
  }

  if (config.count_factors) {
    if (exhaustive) {
      report.theory_incidences = theory::factor_incidences(config.n, config.d);
      if (report.exact_mean_factors() != *report.theory_mean_factors)
        report.failures.push_back("exact mean Y* " + starfactor::to_string(report.exact_mean_factors()) + " differs from " +
                                  starfactor::to_string(*report.theory_mean_factors));
      if (report.sum_factors != *report.theory_incidences)
        report.failures.push_back("total incidences " + starfactor::to_string(report.sum_factors) + " differ from " +
                                  starfactor::to_string(*report.theory_incidences));
    } else {
      const Statistic& mean = *report.find("mean_Y");
      const bool ok = mean.z ? std::abs(*mean.z) <= 3.0 : mean.estimate == *mean.theory;
      if (!ok) report.failures.push_back("mean Y* is more than 3 standard errors from the exact expectation");
    }
  }
  report.checks_passed = report.failures.empty();
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::vector<JointMomentRow> joint_moment_table(const ExperimentReport& report) {
  if (!report.config.count_factors) throw std::invalid_argument("joint moments need factor counts");
  const bool exhaustive = report.config.mode == Mode::exhaustive;
  std::vector<double> y(report.records.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = to_double(report.records[i].factors);

  std::vector<JointMomentRow> rows;
  for (int k = 1; k <= report.config.kmax; ++k) {
    JointMomentRow row;
    row.k = k;
    row.theory = theory::rel_joint_moment(report.config.d, k);
    row.defined = report.sum_factors != 0;
    if (row.defined) {
      row.ratio = to_double(Rational(report.sum_factors_cycles[k - 1], report.sum_factors));
      if (!exhaustive) {
        std::vector<double> x(report.records.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = to_double(report.records[i].cycles[k - 1]);
        row.stderr_ = bootstrap(y.size(), report.config.bootstrap_resamples,
                                derive_seed(report.config.seed ^ kBootstrapStream, static_cast<std::uint64_t>(k)),
                                [&](const std::vector<std::size_t>& picks) -> std::optional<double> {
                                  double sy = 0, syx = 0;
                                  for (auto i : picks) {
                                    sy += y[i];
                                    syx += y[i] * x[i];
                                  }
                                  if (sy == 0) return std::nullopt;
                                  return syx / sy;
                                });
        if (row.stderr_ > 0) row.z = (row.ratio - row.theory) / row.stderr_;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<JointMomentRow> joint_moment_sweep(int d, int n, std::uint64_t samples, int kmax, std::uint64_t seed,
                                               unsigned threads) {
  ExperimentConfig config;
  config.d = d;
  config.n = n;
  config.samples = samples;
  config.kmax = kmax;
  config.seed = seed;
  config.threads = threads;
  return joint_moment_table(run(config));
}

}  // namespace starfactor::experiment
