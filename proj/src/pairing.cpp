#include "starfactor/pairing.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "starfactor/rng.hpp"

namespace starfactor {

PairingSpace::PairingSpace(std::uint32_t n, std::uint32_t d) : n_(n), d_(d) {
  if (n == 0 || d == 0) throw std::invalid_argument("PairingSpace: n and d must be positive");
  if ((static_cast<std::uint64_t>(n) * d) % 2 != 0) {
    throw std::invalid_argument("PairingSpace: d*n must be even (n=" + std::to_string(n) +
                                ", d=" + std::to_string(d) + ")");
  }
}

Pairing::Pairing(const PairingSpace& space, std::vector<PointPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.size() != space.pair_count()) throw std::invalid_argument("Pairing: wrong number of pairs");
  std::vector<char> seen(space.point_count(), 0);
  for (auto& pair : pairs_) {
    if (pair.a > pair.b) std::swap(pair.a, pair.b);
    if (pair.a == pair.b || pair.b >= space.point_count()) {
      throw std::invalid_argument("Pairing: invalid pair");
    }
    if (seen[pair.a] || seen[pair.b]) throw std::invalid_argument("Pairing: point used twice");
    seen[pair.a] = seen[pair.b] = 1;
  }
  std::sort(pairs_.begin(), pairs_.end());
}

Pairing sample_uniform(const PairingSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  const std::uint32_t points = space.point_count();
  // pool holds the unmatched points; position tracks where each point sits.
  std::vector<std::uint32_t> pool(points);
  std::vector<std::uint32_t> position(points);
  for (std::uint32_t p = 0; p < points; ++p) pool[p] = position[p] = p;
  std::vector<char> matched(points, 0);
  auto remove = [&](std::uint32_t point) {
    const std::uint32_t slot = position[point];
    const std::uint32_t last = pool.back();
    pool[slot] = last;
    position[last] = slot;
    pool.pop_back();
    matched[point] = 1;
  };

  std::vector<PointPair> pairs;
  pairs.reserve(space.pair_count());
  for (std::uint32_t lowest = 0; lowest < points; ++lowest) {
    if (matched[lowest]) continue;
    remove(lowest);
    const std::uint32_t partner = pool[rng.uniform_below(pool.size())];
    remove(partner);
    pairs.push_back({lowest, partner});
  }
  return Pairing(Pairing::Trusted{}, std::move(pairs));
}

void enumerate_all(const PairingSpace& space, const std::function<void(const Pairing&)>& visit,
                   std::uint32_t point_cap) {
  if (space.point_count() > point_cap) {
    throw std::length_error("enumerate_all: d*n = " + std::to_string(space.point_count()) +
                            " exceeds the enumeration cap of " + std::to_string(point_cap) +
                            " points ((d*n-1)!! pairings)");
  }
  const std::uint32_t points = space.point_count();
  std::vector<char> matched(points, 0);
  std::vector<PointPair> current;
  current.reserve(space.pair_count());
  Pairing scratch(Pairing::Trusted{}, {});

  auto recurse = [&](auto&& self, std::uint32_t from) -> void {
    while (from < points && matched[from]) ++from;
    if (from == points) {
      scratch.pairs_ = current;
      visit(scratch);
      return;
    }
    matched[from] = 1;
    for (std::uint32_t partner = from + 1; partner < points; ++partner) {
      if (matched[partner]) continue;
      matched[partner] = 1;
      current.push_back({from, partner});
      self(self, from + 1);
      current.pop_back();
      matched[partner] = 0;
    }
    matched[from] = 0;
  };
  recurse(recurse, 0);
}

MultiGraph project(const PairingSpace& space, const Pairing& pairing) {
  MultiGraph g(space.n());
  for (const auto& pair : pairing.pairs()) g.add_edge(space.cell_of(pair.a), space.cell_of(pair.b));
  return g;
}

void write_pairing(std::ostream& out, const Pairing& pairing) {
  for (const auto& pair : pairing.pairs()) out << pair.a << ' ' << pair.b << '\n';
}

Pairing read_pairing(const PairingSpace& space, std::istream& in) {
  std::vector<PointPair> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream row(line);
    std::uint64_t a = 0, b = 0;
    if (!(row >> a >> b)) throw std::runtime_error("read_pairing: malformed line '" + line + "'");
    pairs.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)});
  }
  return Pairing(space, std::move(pairs));
}

}  // namespace starfactor
