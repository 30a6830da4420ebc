#include <doctest.h>

#include <sstream>

#include "starfactor/experiment.hpp"
#include "starfactor/factor_count.hpp"
#include "starfactor/report.hpp"
#include "starfactor/theory.hpp"

using namespace starfactor;
using namespace starfactor::experiment;

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.n = 6;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.count_factors = false;
  CHECK_NOTHROW(validate(c));
  c = ExperimentConfig{};
  c.d = 3;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = ExperimentConfig{};
  c.mode = Mode::exhaustive;
  c.n = 8;
  CHECK_THROWS_AS(validate(c), std::length_error);
  c.n = 4;
  CHECK_NOTHROW(validate(c));
  c.kmax = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  CHECK(parse_mode("exhaustive") == Mode::exhaustive);
  CHECK_THROWS_AS(parse_mode("fast"), std::invalid_argument);
}

TEST_CASE("exhaustive n = 4, d = 4 against an oracle enumeration") {
  ExperimentConfig c;
  c.n = 4;
  c.d = 4;
  c.kmax = 3;
  c.mode = Mode::exhaustive;
  const auto report = run(c);
  CHECK(report.samples == 2027025);
  CHECK(report.exact_mean_factors() == Rational(2048, 715));
  CHECK(report.sum_factors == 5806080);
  CHECK(report.checks_passed);
  CHECK(report.records.empty());

  // Same sums with the partition oracle in place of the counter.
  const PairingSpace space(4, 4);
  BigCount sum = 0, sum_squares = 0;
  enumerate_all(space, [&](const Pairing& p) {
    const BigCount y = oracle_count(project(space, p)).value;
    sum += y;
    sum_squares += y * y;
  });
  CHECK(report.sum_factors == sum);
  CHECK(report.sum_factors_squared == sum_squares);

  const auto* mean = report.find("mean_Y");
  REQUIRE(mean);
  CHECK(mean->stderr_ == 0.0);
  CHECK_FALSE(mean->z.has_value());
  for (const auto& s : report.statistics) CHECK(s.stderr_ == 0.0);

  const auto joint = joint_moment_table(report);
  REQUIRE(joint.size() == 3);
  for (const auto& row : joint) {
    CHECK(row.defined);
    CHECK(row.stderr_ == 0.0);
  }
}

TEST_CASE("Monte Carlo is reproducible across thread counts") {
  ExperimentConfig c;
  c.n = 12;
  c.d = 4;
  c.samples = 3000;
  c.seed = 99;
  c.bootstrap_resamples = 200;
  const auto one = run(c);
  c.threads = 4;
  const auto four = run(c);
  CHECK(one.sum_factors == four.sum_factors);
  CHECK(one.sum_factors_squared == four.sum_factors_squared);
  REQUIRE(one.statistics.size() == four.statistics.size());
  for (std::size_t i = 0; i < one.statistics.size(); ++i) {
    CHECK(one.statistics[i].estimate == four.statistics[i].estimate);
    CHECK(one.statistics[i].stderr_ == four.statistics[i].stderr_);
  }
  auto strip = [](report::Json j) {
    j.erase("run_info");
    j["config"].erase("threads");
    return j.dump();
  };
  CHECK(strip(report::to_json(one, joint_moment_table(one), true)) ==
        strip(report::to_json(four, joint_moment_table(four), true)));
}

TEST_CASE("Monte Carlo mean of Y* matches the exact expectation") {
  ExperimentConfig c;
  c.n = 8;
  c.d = 4;
  c.samples = 20000;
  c.seed = 3;
  const auto report = run(c);
  const auto* mean = report.find("mean_Y");
  REQUIRE(mean);
  CHECK(mean->asserted);
  CHECK(*mean->theory == doctest::Approx(to_double(theory::expected_factors_exact(8, 4))));
  CHECK(std::abs(*mean->z) <= 3.0);
  CHECK(report.checks_passed);
  for (const auto& s : report.statistics) CHECK(s.stderr_ >= 0.0);
}

TEST_CASE("cycle-only runs at large n") {
  ExperimentConfig c;
  c.n = 202;
  c.d = 4;
  c.samples = 500;
  c.count_factors = false;
  const auto report = run(c);
  CHECK(report.find("mean_Y") == nullptr);
  const auto* x1 = report.find("mean_X", 1);
  REQUIRE(x1);
  CHECK(*x1->theory == 1.5);
  CHECK_FALSE(x1->asserted);
  CHECK_THROWS_AS(joint_moment_table(report), std::invalid_argument);
}

TEST_CASE("joint moment table flags an all-zero sample set") {
  ExperimentReport report;
  report.config.kmax = 2;
  report.samples = 5;
  report.sum_factors = 0;
  report.sum_factors_cycles = {0, 0};
  report.records.resize(5);
  for (auto& r : report.records) r.cycles = {1, 2};
  const auto rows = joint_moment_table(report);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) CHECK_FALSE(row.defined);
}

TEST_CASE("CSV layout") {
  std::ostringstream out;
  report::write_csv(out, {{"mean_Y", 0, 2.5, 0.1, 2.4, 1.0}, {"lambda", 3, 4.5, {}, {}, {}}});
  CHECK(out.str() == "name,k,estimate,stderr,theory,z\nmean_Y,0,2.5,0.10000000000000001,2.3999999999999999,1\nlambda,3,4.5,,,\n");
}
