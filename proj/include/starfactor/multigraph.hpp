#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace starfactor {

struct Neighbor {
  std::uint32_t vertex;
  std::uint32_t multiplicity;
};

struct WeightedEdge {
  std::uint32_t u;
  std::uint32_t v;  // u <= v; u == v is a loop
  std::uint32_t multiplicity;
};

/// Undirected multigraph with loops. Vertices are 0..n-1. Parallel edges are
/// kept as a multiplicity per unordered vertex pair and loops as a count per
/// vertex; each loop contributes 2 to its vertex's degree.
class MultiGraph {
 public:
  explicit MultiGraph(std::uint32_t vertex_count);

  // Adds `multiplicity` parallel edges {u, v}; u == v adds loops.
  void add_edge(std::uint32_t u, std::uint32_t v, std::uint32_t multiplicity = 1);

  std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(adjacency_.size()); }

  // Non-loop neighbors of v, sorted by vertex, one entry per distinct neighbor.
  const std::vector<Neighbor>& neighbors(std::uint32_t v) const { return adjacency_[v]; }

  std::uint32_t loops(std::uint32_t v) const { return loops_[v]; }
  std::uint32_t multiplicity(std::uint32_t u, std::uint32_t v) const;
  std::uint32_t degree(std::uint32_t v) const;

  std::uint64_t total_loops() const;
  // Number of edges counted with multiplicity, loops included.
  std::uint64_t edge_count() const;

  // All edges with u <= v in ascending (u, v) order, loops included.
  std::vector<WeightedEdge> edges() const;

  bool operator==(const MultiGraph&) const = default;

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::uint32_t> loops_;
};

/// True iff g has no loops and no edge of multiplicity above one.
bool is_simple(const MultiGraph& g);

// Text form: header "n d" (d is the maximum degree), then one "u v mult" line
// per edge in ascending order, loops written as "u u count".
void write_multigraph(std::ostream& out, const MultiGraph& g);
MultiGraph read_multigraph(std::istream& in);

// Convenience constructors for fixtures and tests.
MultiGraph complete_graph(std::uint32_t n);
MultiGraph cycle_graph(std::uint32_t n);
MultiGraph hypercube_graph(std::uint32_t dimension);
MultiGraph star_graph(std::uint32_t leaves);

// Same multigraph with vertex v renamed to permutation[v].
MultiGraph relabel(const MultiGraph& g, const std::vector<std::uint32_t>& permutation);

}  // namespace starfactor
