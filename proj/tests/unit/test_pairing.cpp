#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "starfactor/pairing.hpp"
#include "starfactor/rng.hpp"

using namespace starfactor;

namespace {

bool is_perfect_matching(const PairingSpace& space, const Pairing& p) {
  std::vector<int> seen(space.point_count(), 0);
  for (const auto& pair : p.pairs()) {
    if (pair.a >= pair.b || pair.b >= space.point_count()) return false;
    ++seen[pair.a];
    ++seen[pair.b];
  }
  for (int s : seen)
    if (s != 1) return false;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (!(p.pairs()[i - 1].a < p.pairs()[i].a)) return false;
  return true;
}

}  // namespace

TEST_CASE("pairing space validation") {
  CHECK_THROWS_AS(PairingSpace(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(PairingSpace(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(PairingSpace(4, 0), std::invalid_argument);
  const PairingSpace space(4, 4);
  CHECK(space.point_count() == 16);
  CHECK(space.pair_count() == 8);
  CHECK(space.cell_of(7) == 1);
}

TEST_CASE("enumeration visits (dn-1)!! distinct canonical pairings") {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}, {2, 2}, {2, 3}, {3, 2}, {4, 2}, {2, 4}, {5, 2}, {3, 4}}) {
    const PairingSpace space(n, d);
    std::set<std::vector<PointPair>> seen;
    bool all_valid = true;
    enumerate_all(space, [&](const Pairing& p) {
      all_valid = all_valid && is_perfect_matching(space, p);
      seen.insert(p.pairs());
    });
    INFO("n=" << n << " d=" << d);
    CHECK(all_valid);
    CHECK(BigCount(seen.size()) == matchings_count(space.pair_count()));
  }
}

TEST_CASE("enumeration respects the cap") {
  const PairingSpace space(6, 3);
  CHECK_THROWS_AS(enumerate_all(space, [](const Pairing&) {}), std::length_error);
  std::size_t count = 0;
  enumerate_all(PairingSpace(1, 4), [&](const Pairing&) { ++count; }, 4);
  CHECK(count == 3);
}

TEST_CASE("sampler is reproducible and produces perfect matchings") {
  const PairingSpace space(50, 4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Pairing p = sample_uniform(space, seed);
    CHECK(is_perfect_matching(space, p));
    CHECK(p == sample_uniform(space, seed));
  }
  CHECK(!(sample_uniform(space, 1) == sample_uniform(space, 2)));
}

TEST_CASE("sampler is uniform over all 15 pairings of six points") {
  const PairingSpace space(2, 3);
  std::map<std::vector<PointPair>, int> index;
  enumerate_all(space, [&](const Pairing& p) { index.emplace(p.pairs(), static_cast<int>(index.size())); });
  REQUIRE(index.size() == 15);
  constexpr int kDraws = 60000;
  std::vector<int> counts(15, 0);
  for (int i = 0; i < kDraws; ++i) ++counts[index.at(sample_uniform(space, 1000 + i).pairs())];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - kDraws / 15.0) * (c - kDraws / 15.0) / (kDraws / 15.0);
  CHECK(chi2 < 36.12);  // 14 degrees of freedom, p = 0.001
}

TEST_CASE("projection is d-regular with dn/2 edges") {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{8, 3}, {12, 4}, {9, 4}, {20, 5}}) {
    const PairingSpace space(n, d);
    const MultiGraph g = project(space, sample_uniform(space, 99));
    CHECK(g.vertex_count() == static_cast<std::uint32_t>(n));
    CHECK(g.edge_count() == static_cast<std::uint64_t>(n * d / 2));
    for (int v = 0; v < n; ++v) CHECK(g.degree(v) == static_cast<std::uint32_t>(d));
  }
}

TEST_CASE("projection keeps loops and parallel edges") {
  const PairingSpace space(2, 4);
  // Cell 0 = points 0..3, cell 1 = points 4..7.
  const Pairing p(space, {{0, 1}, {2, 4}, {3, 5}, {6, 7}});
  const MultiGraph g = project(space, p);
  CHECK(g.loops(0) == 1);
  CHECK(g.loops(1) == 1);
  CHECK(g.multiplicity(0, 1) == 2);
  CHECK(!is_simple(g));
}

TEST_CASE("simple fraction approaches exp(-(d^2-1)/4)") {
  // P(simple) -> exp(-15/4) for d = 4; at n = 1000 the finite-n shift is
  // far below the sampling error.
  const PairingSpace space(1000, 4);
  constexpr int kDraws = 20000;
  int simple = 0;
  for (int i = 0; i < kDraws; ++i) simple += is_simple(project(space, sample_uniform(space, derive_seed(5, i))));
  const double p = std::exp(-3.75);
  const double se = std::sqrt(p * (1 - p) / kDraws);
  CHECK(std::abs(simple / double(kDraws) - p) < 4 * se);
}

TEST_CASE("pairing text round trip and validation") {
  const PairingSpace space(6, 4);
  const Pairing p = sample_uniform(space, 3);
  std::stringstream text;
  write_pairing(text, p);
  CHECK(read_pairing(space, text) == p);

  std::stringstream first_line;
  write_pairing(first_line, p);
  std::string line;
  std::getline(first_line, line);
  CHECK(line == std::to_string(p.pairs()[0].a) + " " + std::to_string(p.pairs()[0].b));

  CHECK_THROWS_AS(Pairing(PairingSpace(1, 4), {{0, 1}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(Pairing(PairingSpace(1, 4), {{0, 1}}), std::invalid_argument);
  std::stringstream bad("0 1\n0 2\n");
  CHECK_THROWS(read_pairing(PairingSpace(1, 4), bad));
  // Order of input pairs does not matter.
  CHECK(Pairing(PairingSpace(1, 4), {{3, 2}, {1, 0}}) == Pairing(PairingSpace(1, 4), {{0, 1}, {2, 3}}));
}
