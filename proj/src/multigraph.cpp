#include "starfactor/multigraph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace starfactor {

namespace {

void add_neighbor(std::vector<Neighbor>& list, std::uint32_t vertex, std::uint32_t multiplicity) {
  auto it = std::lower_bound(list.begin(), list.end(), vertex,
                             [](const Neighbor& n, std::uint32_t v) { return n.vertex < v; });
  if (it != list.end() && it->vertex == vertex) {
    it->multiplicity += multiplicity;
  } else {
    list.insert(it, Neighbor{vertex, multiplicity});
  }
}

}  // namespace

MultiGraph::MultiGraph(std::uint32_t vertex_count) : adjacency_(vertex_count), loops_(vertex_count, 0) {}

void MultiGraph::add_edge(std::uint32_t u, std::uint32_t v, std::uint32_t multiplicity) {
  if (u >= vertex_count() || v >= vertex_count()) throw std::out_of_range("MultiGraph::add_edge: vertex out of range");
  if (multiplicity == 0) return;
  if (u == v) {
    loops_[u] += multiplicity;
    return;
  }
  add_neighbor(adjacency_[u], v, multiplicity);
  add_neighbor(adjacency_[v], u, multiplicity);
}

std::uint32_t MultiGraph::multiplicity(std::uint32_t u, std::uint32_t v) const {
  if (u == v) return loops_[u];
  const auto& list = adjacency_[u];
  auto it = std::lower_bound(list.begin(), list.end(), v,
                             [](const Neighbor& n, std::uint32_t x) { return n.vertex < x; });
  return (it != list.end() && it->vertex == v) ? it->multiplicity : 0;
}

std::uint32_t MultiGraph::degree(std::uint32_t v) const {
  std::uint32_t total = 2 * loops_[v];
  for (const auto& n : adjacency_[v]) total += n.multiplicity;
  return total;
}

std::uint64_t MultiGraph::total_loops() const {
  std::uint64_t total = 0;
  for (auto count : loops_) total += count;
  return total;
}

std::uint64_t MultiGraph::edge_count() const {
  std::uint64_t total = total_loops();
  for (std::uint32_t u = 0; u < vertex_count(); ++u) {
    for (const auto& n : adjacency_[u]) {
      if (u < n.vertex) total += n.multiplicity;
    }
  }
  return total;
}

std::vector<WeightedEdge> MultiGraph::edges() const {
  std::vector<WeightedEdge> result;
  for (std::uint32_t u = 0; u < vertex_count(); ++u) {
    if (loops_[u] > 0) result.push_back({u, u, loops_[u]});
    for (const auto& n : adjacency_[u]) {
      if (u < n.vertex) result.push_back({u, n.vertex, n.multiplicity});
    }
  }
  return result;
}

bool is_simple(const MultiGraph& g) {
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
    if (g.loops(v) != 0) return false;
    for (const auto& n : g.neighbors(v)) {
      if (n.multiplicity > 1) return false;
    }
  }
  return true;
}

void write_multigraph(std::ostream& out, const MultiGraph& g) {
  std::uint32_t max_degree = 0;
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v) max_degree = std::max(max_degree, g.degree(v));
  out << g.vertex_count() << ' ' << max_degree << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.multiplicity << '\n';
}

MultiGraph read_multigraph(std::istream& in) {
  std::string line;
  auto next_line = [&](std::string& target) {
    while (std::getline(in, target)) {
      if (target.find_first_not_of(" \t\r") != std::string::npos && target[0] != '#') return true;
    }
    return false;
  };
  if (!next_line(line)) throw std::runtime_error("read_multigraph: missing header");
  std::istringstream header(line);
  std::uint64_t n = 0, d = 0;
  if (!(header >> n >> d)) throw std::runtime_error("read_multigraph: malformed header '" + line + "'");
  MultiGraph g(static_cast<std::uint32_t>(n));
  while (next_line(line)) {
    std::istringstream row(line);
    std::uint64_t u = 0, v = 0, m = 0;
    if (!(row >> u >> v >> m)) throw std::runtime_error("read_multigraph: malformed edge line '" + line + "'");
    if (u >= n || v >= n) throw std::runtime_error("read_multigraph: vertex out of range in '" + line + "'");
    g.add_edge(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(m));
  }
  return g;
}

MultiGraph complete_graph(std::uint32_t n) {
  MultiGraph g(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

MultiGraph cycle_graph(std::uint32_t n) {
  MultiGraph g(n);
  for (std::uint32_t v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

MultiGraph hypercube_graph(std::uint32_t dimension) {
  const std::uint32_t n = 1u << dimension;
  MultiGraph g(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t bit = 0; bit < dimension; ++bit) {
      const std::uint32_t w = v ^ (1u << bit);
      if (v < w) g.add_edge(v, w);
    }
  }
  return g;
}

MultiGraph star_graph(std::uint32_t leaves) {
  MultiGraph g(leaves + 1);
  for (std::uint32_t leaf = 1; leaf <= leaves; ++leaf) g.add_edge(0, leaf);
  return g;
}

MultiGraph relabel(const MultiGraph& g, const std::vector<std::uint32_t>& permutation) {
  if (permutation.size() != g.vertex_count()) throw std::invalid_argument("relabel: permutation size mismatch");
  MultiGraph out(g.vertex_count());
  for (const auto& e : g.edges()) out.add_edge(permutation[e.u], permutation[e.v], e.multiplicity);
  return out;
}

}  // namespace starfactor
