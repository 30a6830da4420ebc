#include <doctest.h>

#include <numeric>

#include "starfactor/cycle_census.hpp"
#include "starfactor/pairing.hpp"
#include "starfactor/rng.hpp"

using namespace starfactor;

TEST_CASE("complete graphs and cycles") {
  const auto k4 = census(complete_graph(4), 4);
  CHECK(k4.at(1) == 0);
  CHECK(k4.at(2) == 0);
  CHECK(k4.at(3) == 4);
  CHECK(k4.at(4) == 3);

  // K_5: C(5,3) triangles, 5 * 3 four-cycles, 4!/2 five-cycles.
  const auto k5 = census(complete_graph(5), 5);
  CHECK(k5.at(3) == 10);
  CHECK(k5.at(4) == 15);
  CHECK(k5.at(5) == 12);

  for (std::uint32_t n : {3u, 5u, 8u}) {
    const auto c = census(cycle_graph(n), 8);
    for (std::uint32_t k = 1; k <= 8; ++k) CHECK(c.at(k) == (k == n ? 1 : 0));
  }

  const auto q3 = census(hypercube_graph(3), 6);
  CHECK(q3.at(3) == 0);
  CHECK(q3.at(4) == 6);
  CHECK(q3.at(5) == 0);
  CHECK(q3.at(6) == 16);
}

TEST_CASE("loops and parallel edges follow pairing conventions") {
  MultiGraph g(3);
  g.add_edge(0, 0, 2);
  g.add_edge(0, 1, 3);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  const auto c = census(g, 3);
  CHECK(c.at(1) == 2);
  CHECK(c.at(2) == 3);  // C(3, 2)
  CHECK(c.at(3) == 3);  // one triangle through the tripled edge
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(census(complete_graph(4), 0), std::invalid_argument);
  MultiGraph g(2);
  g.add_edge(0, 1, 2);
  CHECK_THROWS_AS(census_trace_check(g), std::invalid_argument);
}

TEST_CASE("census agrees with adjacency traces on simple projections") {
  Rng rng(31);
  int simple = 0;
  for (int i = 0; i < 4000 && simple < 300; ++i) {
    const std::uint32_t n = 5 + static_cast<std::uint32_t>(rng.uniform_below(6));
    const std::uint32_t d = 2 + static_cast<std::uint32_t>(rng.uniform_below(3));
    if ((n * d) % 2) continue;
    const PairingSpace space(n, d);
    const MultiGraph g = project(space, sample_uniform(space, rng.next()));
    if (!is_simple(g)) continue;
    ++simple;
    const auto c = census(g, 4);
    const auto t = census_trace_check(g);
    CHECK(c.at(3) == t.triangles);
    CHECK(c.at(4) == t.four_cycles);
  }
  CHECK(simple == 300);
}

TEST_CASE("census is invariant under relabeling") {
  Rng rng(5);
  const PairingSpace space(30, 4);
  for (int i = 0; i < 10; ++i) {
    const MultiGraph g = project(space, sample_uniform(space, rng.next()));
    std::vector<std::uint32_t> perm(30);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::uint32_t j = 29; j > 0; --j) std::swap(perm[j], perm[rng.uniform_below(j + 1)]);
    CHECK(census(relabel(g, perm), 6).counts == census(g, 6).counts);
  }
}
