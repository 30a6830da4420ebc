#pragma once

#include <cstdint>
#include <vector>

#include "starfactor/bigint.hpp"
#include "starfactor/multigraph.hpp"

namespace starfactor {

/// Short-cycle counts X_1..X_kmax under pairing-model conventions: X_1 counts
/// loops, X_2 counts pairs of parallel edges (sum of C(m, 2)), and X_k for
/// k >= 3 counts k-cycles on distinct vertices weighted by the product of
/// their edge multiplicities.
struct CycleCensus {
  std::uint32_t kmax = 0;
  std::vector<BigCount> counts;  // counts[k - 1] = X_k

  const BigCount& at(std::uint32_t k) const { return counts.at(k - 1); }
};

/// Rooted DFS from each vertex s over vertices above s; a cycle is counted
/// once by requiring its second vertex to be smaller than its last.
/// Throws std::invalid_argument for kmax == 0.
CycleCensus census(const MultiGraph& g, std::uint32_t kmax);

struct TraceCensus {
  BigCount triangles;     // X_3 = tr(A^3) / 6
  BigCount four_cycles;   // X_4 = (tr(A^4) - 2m - 2 sum_v deg(deg - 1)) / 8
};

/// Independent X_3, X_4 from exact integer adjacency powers. Simple graphs
/// only; throws std::invalid_argument otherwise.
TraceCensus census_trace_check(const MultiGraph& g);

}  // namespace starfactor
