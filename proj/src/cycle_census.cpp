#include "starfactor/cycle_census.hpp"

#include <stdexcept>

namespace starfactor {

CycleCensus census(const MultiGraph& g, std::uint32_t kmax) {
  if (kmax == 0) throw std::invalid_argument("census: kmax must be at least 1");
  const std::uint32_t n = g.vertex_count();
  CycleCensus result;
  result.kmax = kmax;
  result.counts.assign(kmax, BigCount(0));

  result.counts[0] = g.total_loops();
  if (kmax >= 2) {
    BigCount parallel = 0;
    for (const auto& e : g.edges()) {
      if (e.u != e.v && e.multiplicity >= 2) {
        parallel += BigCount(e.multiplicity) * (e.multiplicity - 1) / 2;
      }
    }
    result.counts[1] = parallel;
  }
  if (kmax < 3) return result;

  // Path weights stay far below 2^128 for the supported kmax; totals are
  // folded into BigCount per root.
  std::vector<unsigned __int128> per_length(kmax + 1, 0);
  std::vector<char> on_path(n, 0);
  std::vector<std::uint32_t> path;
  path.reserve(kmax);

  for (std::uint32_t root = 0; root < n; ++root) {
    std::fill(per_length.begin(), per_length.end(), 0);
    path.assign(1, root);
    on_path[root] = 1;
    auto walk = [&](auto&& self, unsigned __int128 weight) -> void {
      const std::uint32_t tail = path.back();
      const auto length = static_cast<std::uint32_t>(path.size());
      if (length >= 3) {
        const std::uint32_t closing = g.multiplicity(tail, root);
        if (closing != 0 && path[1] < tail) per_length[length] += weight * closing;
      }
      if (length == kmax) return;
      for (const auto& next : g.neighbors(tail)) {
        if (next.vertex <= root || on_path[next.vertex]) continue;
        on_path[next.vertex] = 1;
        path.push_back(next.vertex);
        self(self, weight * next.multiplicity);
        path.pop_back();
        on_path[next.vertex] = 0;
      }
    };
    walk(walk, 1);
    on_path[root] = 0;
    for (std::uint32_t k = 3; k <= kmax; ++k) {
      if (per_length[k] == 0) continue;
      const auto high = static_cast<std::uint64_t>(per_length[k] >> 64);
      const auto low = static_cast<std::uint64_t>(per_length[k]);
      result.counts[k - 1] += (BigCount(high) << 64) + BigCount(low);
    }
  }
  return result;
}

TraceCensus census_trace_check(const MultiGraph& g) {
  if (!is_simple(g)) throw std::invalid_argument("census_trace_check: graph must be simple");
  const std::uint32_t n = g.vertex_count();
  using Matrix = std::vector<std::vector<BigCount>>;
  Matrix adjacency(n, std::vector<BigCount>(n, 0));
  for (const auto& e : g.edges()) adjacency[e.u][e.v] = adjacency[e.v][e.u] = 1;

  auto multiply = [n](const Matrix& a, const Matrix& b) {
    Matrix c(n, std::vector<BigCount>(n, 0));
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t k = 0; k < n; ++k) {
        if (a[i][k].is_zero()) continue;
        for (std::uint32_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
      }
    }
    return c;
  };
  auto trace = [n](const Matrix& a) {
    BigCount t = 0;
    for (std::uint32_t i = 0; i < n; ++i) t += a[i][i];
    return t;
  };

  const Matrix squared = multiply(adjacency, adjacency);
  const Matrix cubed = multiply(squared, adjacency);
  const Matrix fourth = multiply(squared, squared);

  BigCount degree_term = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    const BigCount deg = g.degree(v);
    degree_term += deg * (deg - 1);
  }
  const BigCount edges = g.edge_count();

  TraceCensus out;
  out.triangles = trace(cubed) / 6;
  out.four_cycles = (trace(fourth) - 2 * edges - 2 * degree_term) / 8;
  return out;
}

}  // namespace starfactor
