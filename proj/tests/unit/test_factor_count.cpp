#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "starfactor/factor_count.hpp"
#include "starfactor/pairing.hpp"
#include "starfactor/rng.hpp"

using namespace starfactor;

namespace {

BigCount count(const MultiGraph& g) { return count_3star_factors(g).value; }

// Claw factors of K_n: partitions into blocks of four, times a center per block.
BigCount complete_graph_factors(std::uint32_t n) {
  return factorial(n) / (boost::multiprecision::pow(BigCount(24), n / 4) * factorial(n / 4)) *
         boost::multiprecision::pow(BigCount(4), n / 4);
}

MultiGraph random_projection(std::uint32_t n, std::uint32_t d, std::uint64_t seed) {
  const PairingSpace space(n, d);
  return project(space, sample_uniform(space, seed));
}

}  // namespace

TEST_CASE("fixed graphs") {
  CHECK(count(complete_graph(4)) == 4);
  CHECK(count(hypercube_graph(3)) == 4);
  CHECK(count(cycle_graph(8)) == 0);
  CHECK(count(star_graph(3)) == 1);

  MultiGraph claw = star_graph(3);
  claw.add_edge(0, 1);
  CHECK(claw.multiplicity(0, 1) == 2);
  CHECK(count(claw) == 2);

  MultiGraph looped = star_graph(3);
  looped.add_edge(2, 2, 3);
  CHECK(count(looped) == 1);  // loops are never star edges
}

TEST_CASE("n not divisible by four has no factor") {
  CHECK(count(complete_graph(5)) == 0);
  CHECK(count(complete_graph(6)) == 0);
  CHECK(count(MultiGraph(0)) == 1);  // the empty factor
  CHECK_FALSE(has_3star_factor(complete_graph(7)));
}

TEST_CASE("complete graphs match the partition formula") {
  for (std::uint32_t n : {4u, 8u, 12u, 16u}) {
    INFO("n=" << n);
    CHECK(count(complete_graph(n)) == complete_graph_factors(n));
  }
  CHECK(complete_graph_factors(8) == 560);
  CHECK(oracle_count(complete_graph(12)).value == complete_graph_factors(12));
}

TEST_CASE("counter agrees with the partition oracle on random projections") {
  Rng rng(2024);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const std::uint32_t d = 3 + static_cast<std::uint32_t>(rng.uniform_below(3));
    std::uint32_t n = 4 * (1 + static_cast<std::uint32_t>(rng.uniform_below(3)));
    if ((n * d) % 2) continue;
    const MultiGraph g = random_projection(n, d, rng.next());
    INFO("n=" << n << " d=" << d << " case " << i);
    CHECK(count(g) == oracle_count(g).value);
    CHECK(has_3star_factor(g) == (count(g) > 0));
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("count is invariant under relabeling") {
  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    const MultiGraph g = random_projection(16, 4, rng.next());
    std::vector<std::uint32_t> perm(16);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::uint32_t j = 15; j > 0; --j) std::swap(perm[j], perm[rng.uniform_below(j + 1)]);
    CHECK(count(relabel(g, perm)) == count(g));
  }
}

TEST_CASE("doubling every multiplicity scales the count by 2^(3n/4)") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const MultiGraph g = random_projection(12, 4, rng.next());
    MultiGraph doubled(g.vertex_count());
    for (const auto& e : g.edges()) doubled.add_edge(e.u, e.v, 2 * e.multiplicity);
    CHECK(count(doubled) == count(g) * 512);
  }
}

TEST_CASE("large multiplicities fall back to exact arithmetic") {
  MultiGraph heavy(8);
  for (std::uint32_t u = 0; u < 8; ++u)
    for (std::uint32_t v = u + 1; v < 8; ++v) heavy.add_edge(u, v, 1u << 20);
  // Each factor uses six edges of multiplicity 2^20.
  CHECK(count(heavy) == BigCount(560) * boost::multiprecision::pow(BigCount(2), 120));
}

TEST_CASE("oracle refuses large graphs") {
  CHECK_THROWS_AS(oracle_count(complete_graph(16)), std::length_error);
}
