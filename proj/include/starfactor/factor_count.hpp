#pragma once

#include "starfactor/bigint.hpp"
#include "starfactor/multigraph.hpp"

namespace starfactor {

/// Number of 3-star factors of g at the pairing level: every set of
/// vertex-disjoint 3-stars covering all vertices, weighted by the product of
/// the multiplicities of the star edges (parallel edges are distinguishable).
/// Loops are never star edges. Zero unless 4 divides n.
struct StarFactorCount {
  BigCount value;
  bool operator==(const StarFactorCount&) const = default;
};

/// Backtracking count. Always extends the lowest uncovered vertex v, either as
/// a center with three uncovered neighbors or as a leaf of an uncovered
/// neighbor c together with two further uncovered neighbors of c. Sub-results
/// are memoized on the covered set for n <= 128.
StarFactorCount count_3star_factors(const MultiGraph& g);

/// Early-exit existence test.
bool has_3star_factor(const MultiGraph& g);

inline constexpr std::uint32_t kOracleMaxVertices = 12;

/// Brute force over all partitions of the vertices into blocks of four; each
/// block contributes the sum over its possible centers of the product of the
/// center-to-leaf multiplicities. Throws std::length_error for n > 12.
StarFactorCount oracle_count(const MultiGraph& g);

}  // namespace starfactor
