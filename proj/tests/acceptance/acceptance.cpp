// Acceptance suite: one line per criterion, "[PASS] N name: details" or
// "[FAIL] N name: details". `--criterion N` runs a single criterion; the exit
// status is zero iff every criterion run passed.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "starfactor/cycle_census.hpp"
#include "starfactor/experiment.hpp"
#include "starfactor/factor_count.hpp"
#include "starfactor/laplace.hpp"
#include "starfactor/pairing.hpp"
#include "starfactor/parallel.hpp"
#include "starfactor/rng.hpp"
#include "starfactor/theory.hpp"

using namespace starfactor;

namespace {

struct Outcome {
  Outcome() { detail << std::setprecision(10); }

  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "FAILED " << what << "; ";
    }
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double rel(double a, double b) { return std::abs(a / b - 1.0); }

void exhaustive_oracle(Outcome& out) {
  experiment::ExperimentConfig config;
  config.n = 4;
  config.d = 4;
  config.kmax = 1;
  config.mode = experiment::Mode::exhaustive;
  config.threads = 1;
  const Stopwatch clock;
  const auto report = experiment::run(config);
  const double elapsed = clock.seconds();
  out.require(report.samples == 2027025, "pairing count");
  out.require(report.exact_mean_factors() == Rational(2048, 715), "mean Y* = 2048/715");
  out.require(report.sum_factors == 5806080, "incidences = 5806080");
  out.require(theory::factor_incidences(4, 4) == 5806080, "incidence formula");
  out.require(elapsed < 120.0, "runtime < 120 s");
  out.detail << report.samples << " pairings, mean Y* = " << to_string(report.exact_mean_factors())
             << ", incidences = " << to_string(report.sum_factors) << ", " << elapsed << " s single-threaded";
}

void finite_n_expectation(Outcome& out) {
  experiment::ExperimentConfig config;
  config.n = 8;
  config.d = 4;
  config.samples = 100000;
  config.seed = 1;
  config.kmax = 1;
  config.threads = default_thread_count();
  const Stopwatch clock;
  const auto report = experiment::run(config);
  const double elapsed = clock.seconds();
  const auto& mean = *report.find("mean_Y");
  const double exact = to_double(theory::expected_factors_exact(8, 4));
  out.require(mean.z && std::abs(*mean.z) <= 3.0, "|z| <= 3");
  out.require(elapsed < 60.0, "runtime < 60 s");
  out.detail << "mean Y* = " << mean.estimate << " +- " << mean.stderr_ << " vs exact "
             << to_string(theory::expected_factors_exact(8, 4)) << " = " << exact << ", z = " << mean.z.value_or(NAN)
             << ", " << elapsed << " s";
}

void moment_identity(Outcome& out) {
  double worst = 0;
  for (int d = 4; d <= 10; ++d) {
    const auto r = theory::moment_identity_check(d, 1e-7);
    out.require(r.residual < 1e-7, "identity at d=" + std::to_string(d));
    worst = std::max(worst, r.residual);
  }
  const double r4 = theory::variance_ratio(4), r6 = theory::variance_ratio(6);
  out.require(rel(r4, 1.7334385) < 1e-6, "R(4) ~ 1.7334385");
  out.require(rel(r6, 1.2577883) < 1e-6, "R(6) ~ 1.2577883");
  out.detail << "max |sum lambda_k delta_k^2 - ln R(d)| over d=4..10 = " << worst << "; R(4) = " << r4
             << " (listed 1.7334385), R(6) = " << r6 << " (listed 1.2577883)";
}

void simple_identity(Outcome& out) {
  double worst = 0;
  for (int d = 4; d <= 10; ++d) {
    const auto s = theory::simple_model_constants(d);
    out.require(s.prefactor_residual < 1e-10, "prefactor at d=" + std::to_string(d));
    worst = std::max(worst, s.prefactor_residual);
  }
  const auto s4 = theory::simple_model_constants(4);
  out.require(std::abs(s4.prefactor_exponent + 0.36960) < 1e-12, "d=4 exponent -0.36960");
  out.detail << "max residual over d=4..10 = " << worst << "; d=4 exponent " << s4.prefactor_exponent
             << " vs -(0.24 + 0.1296) = " << -s4.removed_terms;
}

void plug_in(Outcome& out) {
  double worst_residual = 0, worst_value = 0;
  for (int d = 4; d <= 10; ++d) {
    const auto p = laplace::plug_in_check(d);
    const std::string at = " at d=" + std::to_string(d);
    out.require(p.max_active_residual < 1e-10, "stationarity" + at);
    out.require(p.hessian.negative_definite(), "negative definite Hessian" + at);
    out.require(p.value_relative_error < 1e-12, "F(x_max)" + at);
    worst_residual = std::max(worst_residual, p.max_active_residual);
    worst_value = std::max(worst_value, p.value_relative_error);
  }
  const auto p6 = laplace::plug_in_check(6);
  out.require(std::abs(p6.value - 35.29264) < 1e-3, "F(x_max; 6) ~ 35.29264");
  out.detail << "max stationarity residual " << worst_residual << ", max |F/closed form - 1| " << worst_value
             << "; F(x_max; 6) = " << p6.value << " (listed 35.29264), Hessian eigenvalues at d=6 in ["
             << p6.hessian.eigenvalues.minCoeff() << ", " << p6.hessian.eigenvalues.maxCoeff() << "]";
}

void global_max(Outcome& out) {
  laplace::SearchOptions options;
  options.starts = 2000;
  options.seed = 7;
  options.threads = default_thread_count();
  double worst_excess = -1e300, slowest = 0;
  for (int d = 4; d <= 10; ++d) {
    const Stopwatch clock;
    const auto g = laplace::find_global_max(d, options);
    const auto b = laplace::boundary_scan(d, options);
    const double elapsed = clock.seconds();
    const std::string at = " at d=" + std::to_string(d);
    out.require(g.max_log_value_excess <= laplace::kLogValueTolerance, "no start above F(x_max)" + at);
    out.require(g.max_coordinate_error <= laplace::kCoordinateTolerance, "best point = x_max" + at);
    out.require(b.passed, "boundary scan" + at);
    out.require(b.c1_value < std::exp(b.interior_max_log_value), "F(c1) < F(x_max)" + at);
    out.require(b.c1_relative_error < 1e-9, "F(c1) closed form" + at);
    out.require(elapsed < 300.0, "runtime" + at);
    worst_excess = std::max(worst_excess, g.max_log_value_excess);
    slowest = std::max(slowest, elapsed);
    if (d == 6) {
      out.require(std::abs(b.c1_value - 22.544) < 5e-4, "F(c1; 6) ~ 22.544");
      out.detail << "F(c1; 6) = " << b.c1_value << " vs closed form " << b.c1_closed_form << "; ";
    }
  }
  out.detail << "2000 starts per d: max ln F excess over ln F(x_max) = " << worst_excess
             << ", slowest d took " << slowest << " s";
}

void laplace_pipeline(Outcome& out) {
  std::ostringstream rows;
  for (int d = 6; d <= 10; ++d) {
    const auto g = laplace::gaussian_constant(d);
    const auto r = laplace::reconstruct_variance_ratio(d);
    const std::string at = " at d=" + std::to_string(d);
    out.require(g.relative_error < 1e-6, "Gaussian constant vs displayed form" + at);
    out.require(r.relative_error < 1e-6, "reconstructed R(d)" + at);
    rows << " d=" << d << ": G = " << g.numeric << ", display = " << *g.display << ", ratio = " << g.display_ratio
         << ", reconstructed R = " << r.reconstructed << " (rel err " << r.relative_error << ");";
  }
  out.detail << rows.str();
}

void transfer_matrix(Outcome& out) {
  double worst_trace = 0, worst_moment = 0;
  for (int d = 4; d <= 10; ++d) {
    const auto t = theory::transfer_matrix(d);
    for (int k = 1; k <= 20; ++k) {
      const double a = theory::transfer_trace_power(t, k), b = theory::transfer_trace_spectral(t, k);
      const double trace_error = std::abs(a - b) / std::max(1.0, std::abs(a));
      const double direct = theory::lambda(d, k) * (1 + theory::delta(d, k));
      const double moment_error = rel(theory::rel_joint_moment_via_transfer(d, k), direct);
      worst_trace = std::max(worst_trace, trace_error);
      worst_moment = std::max(worst_moment, moment_error);
    }
  }
  out.require(worst_trace < 1e-9, "trace agreement");
  out.require(worst_moment < 1e-10, "joint moment agreement");
  out.require(std::abs(theory::rel_joint_moment(4, 3) - 5.292) < 1e-10, "d=4, k=3 value 5.292");
  out.detail << "max trace error " << worst_trace << ", max joint-moment error " << worst_moment
             << "; rel_joint_moment(4,3) = " << theory::rel_joint_moment(4, 3);
}

void cycle_statistics(Outcome& out) {
  experiment::ExperimentConfig config;
  config.n = 400;
  config.d = 4;
  config.samples = 2000;
  config.kmax = 3;
  config.seed = 2;
  config.count_factors = false;
  config.threads = default_thread_count();
  const auto report = experiment::run(config);
  const auto& x1 = *report.find("mean_X", 1);
  const auto& x3 = *report.find("mean_X", 3);
  out.require(std::abs(x1.estimate - 1.5) <= 3 * x1.stderr_, "mean X1 within 3 sigma of 1.5");
  out.require(std::abs(x3.estimate - 4.5) <= 3 * x3.stderr_, "mean X3 within 3 sigma of 4.5");

  Rng rng(2718);
  int cases = 0, mismatches = 0;
  while (cases < 1000) {
    const auto n = static_cast<std::uint32_t>(4 + rng.uniform_below(7));
    const auto d = static_cast<std::uint32_t>(2 + rng.uniform_below(3));
    if ((n * d) % 2) continue;
    const PairingSpace space(n, d);
    const MultiGraph g = project(space, sample_uniform(space, rng.next()));
    if (!is_simple(g)) continue;
    ++cases;
    const auto c = census(g, 4);
    const auto t = census_trace_check(g);
    if (c.at(3) != t.triangles || c.at(4) != t.four_cycles) ++mismatches;
  }
  out.require(mismatches == 0, "census = trace oracle");
  out.detail << "mean X1 = " << x1.estimate << " +- " << x1.stderr_ << ", mean X3 = " << x3.estimate << " +- "
             << x3.stderr_ << "; census vs trace: " << mismatches << " mismatches in " << cases
             << " simple projections (n <= 10)";
}

void w_sampler(Outcome& out) {
  const unsigned threads = default_thread_count();
  const auto full = theory::sample_W_moments(4, 1, 30, 11, 1000000, threads);
  const double r4 = theory::variance_ratio(4);
  out.require(std::abs(full.mean - 1.0) <= 3 * full.mean_stderr, "mean W = 1");
  out.require(std::abs(full.mean_square - r4) <= 3 * full.mean_square_stderr, "mean W^2 = R(4)");
  const auto simple = theory::sample_W_moments(4, 3, 30, 12, 1000000, threads);
  const double target = theory::simple_model_constants(4).second_moment_ratio;
  out.require(std::abs(simple.mean_square - target) <= 3 * simple.mean_square_stderr, "k >= 3 second moment");
  out.detail << "k<=30: mean W = " << full.mean << " +- " << full.mean_stderr << ", mean W^2 = " << full.mean_square
             << " +- " << full.mean_square_stderr << " vs " << r4 << "; k=3..30: mean W^2 = " << simple.mean_square
             << " +- " << simple.mean_square_stderr << " vs " << target;
}

void counter_oracle(Outcome& out) {
  Rng rng(1729);
  int cases = 0, mismatches = 0, nonzero = 0;
  while (cases < 1000) {
    const auto n = static_cast<std::uint32_t>(1 + rng.uniform_below(12));
    const auto d = static_cast<std::uint32_t>(3 + rng.uniform_below(3));
    if ((n * d) % 2) continue;
    const PairingSpace space(n, d);
    const MultiGraph g = project(space, sample_uniform(space, rng.next()));
    ++cases;
    const BigCount a = count_3star_factors(g).value;
    if (a != oracle_count(g).value) ++mismatches;
    if (a != 0) ++nonzero;
  }
  out.require(mismatches == 0, "random multigraphs");
  MultiGraph claw = star_graph(3);
  claw.add_edge(0, 1);
  const BigCount k4 = count_3star_factors(complete_graph(4)).value;
  const BigCount q3 = count_3star_factors(hypercube_graph(3)).value;
  const BigCount c8 = count_3star_factors(cycle_graph(8)).value;
  const BigCount doubled = count_3star_factors(claw).value;
  out.require(k4 == 4 && q3 == 4 && c8 == 0 && doubled == 2, "fixed cases");
  out.detail << mismatches << " mismatches in " << cases << " random projections (" << nonzero
             << " with factors); K4 -> " << to_string(k4) << ", Q3 -> " << to_string(q3) << ", C8 -> "
             << to_string(c8) << ", doubled-edge claw -> " << to_string(doubled);
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "exhaustive oracle", exhaustive_oracle},
      {2, "finite-n expectation", finite_n_expectation},
      {3, "moment identity", moment_identity},
      {4, "simple-graph correction identity", simple_identity},
      {5, "x_max plug-in", plug_in},
      {6, "global-max certification", global_max},
      {7, "Laplace pipeline", laplace_pipeline},
      {8, "transfer matrix", transfer_matrix},
      {9, "cycle statistics", cycle_statistics},
      {10, "W sampler", w_sampler},
      {11, "counter oracle equivalence", counter_oracle},
  };

  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    Outcome out;
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.passed = false;
      out.detail << "exception: " << e.what();
    }
    std::printf("[%s] %d %s: %s\n", out.passed ? "PASS" : "FAIL", c.id, c.name, out.detail.str().c_str());
    std::fflush(stdout);
    all = all && out.passed;
  }
  return all ? 0 : 1;
}
