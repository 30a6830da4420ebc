#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "starfactor/bigint.hpp"
#include "starfactor/parallel.hpp"
#include "starfactor/rng.hpp"

using namespace starfactor;

TEST_CASE("matchings_count follows the double factorial recurrence") {
  CHECK(matchings_count(0) == 1);
  CHECK(matchings_count(1) == 1);
  CHECK(matchings_count(2) == 3);
  BigCount expected = 1;
  for (std::uint64_t m = 1; m <= 60; ++m) {
    expected *= 2 * m - 1;
    CHECK(matchings_count(m) == expected);
  }
  CHECK(matchings_count(8) == 2027025);
}

TEST_CASE("factorial") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(20) == BigCount("2432902008176640000"));
  CHECK(factorial(25) == factorial(24) * 25);
}

TEST_CASE("rational formatting") {
  CHECK(to_string(Rational(4096, 1430)) == "2048/715");
  CHECK(to_string(BigCount(5806080)) == "5806080");
}

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs = differs || x != c.next();
  }
  CHECK(differs);

  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 10000; ++i) seeds.insert(derive_seed(7, i));
  CHECK(seeds.size() == 10000);
  CHECK(derive_seed(7, 3) != derive_seed(8, 3));
}

TEST_CASE("uniform_below passes a chi-square test") {
  Rng rng(1);
  constexpr int kBins = 7;
  constexpr int kDraws = 70000;
  std::vector<int> counts(kBins, 0);
  for (int i = 0; i < kDraws; ++i) ++counts[rng.uniform_below(kBins)];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - kDraws / double(kBins)) * (c - kDraws / double(kBins)) / (kDraws / double(kBins));
  CHECK(chi2 < 22.46);  // 6 degrees of freedom, p = 0.001
  CHECK(rng.uniform_below(1) == 0);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform01();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("poisson variates have the right mean and variance") {
  for (double mean : {0.5, 3.0, 9.99, 10.0, 50.0, 1e6}) {
    Rng rng(static_cast<std::uint64_t>(mean * 1000) + 1);
    constexpr int kDraws = 200000;
    double sum = 0, sum_sq = 0;
    for (int i = 0; i < kDraws; ++i) {
      const double x = static_cast<double>(sample_poisson(rng, mean));
      sum += x;
      sum_sq += x * x;
    }
    const double m = sum / kDraws;
    const double v = sum_sq / kDraws - m * m;
    INFO("mean " << mean);
    CHECK(std::abs(m - mean) < 5 * std::sqrt(mean / kDraws));
    CHECK(std::abs(v / mean - 1) < 0.03);
  }
  Rng rng(1);
  CHECK(sample_poisson(rng, 0.0) == 0);
  CHECK_THROWS_AS(sample_poisson(rng, -1.0), std::domain_error);
  CHECK_THROWS_AS(sample_poisson(rng, 1e17), std::domain_error);
}

TEST_CASE("poisson log pmf") {
  double total = 0;
  for (std::uint64_t k = 0; k < 100; ++k) total += std::exp(poisson_log_pmf(k, 5.0));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (std::uint64_t k : {0ULL, 1ULL, 7ULL, 30ULL, 200ULL}) {
    const double mean = 23.5;
    const double direct = k * std::log(mean) - mean - std::lgamma(k + 1.0);
    CHECK(poisson_log_pmf(k, mean) == doctest::Approx(direct).epsilon(1e-12));
  }
  // Far in the bulk of a huge mean, where k log(mean) - mean cancels badly.
  const double mean = 1e12;
  CHECK(poisson_log_pmf(1000000000000ULL, mean) ==
        doctest::Approx(-0.5 * std::log(2 * M_PI * mean)).epsilon(1e-9));
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw std::runtime_error("boom"); }),
                  std::runtime_error);
}
