#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "starfactor/bigint.hpp"
#include "starfactor/multigraph.hpp"

namespace starfactor {

/// n cells of d points each. Point j of cell i has global index i*d + j.
class PairingSpace {
 public:
  // Throws std::invalid_argument unless n, d >= 1 and d*n is even.
  PairingSpace(std::uint32_t n, std::uint32_t d);

  std::uint32_t n() const { return n_; }
  std::uint32_t d() const { return d_; }
  std::uint32_t point_count() const { return n_ * d_; }
  std::uint32_t pair_count() const { return n_ * d_ / 2; }
  std::uint32_t cell_of(std::uint32_t point) const { return point / d_; }

 private:
  std::uint32_t n_;
  std::uint32_t d_;
};

struct PointPair {
  std::uint32_t a;  // a < b
  std::uint32_t b;
  bool operator==(const PointPair&) const = default;
  auto operator<=>(const PointPair&) const = default;
};

/// Perfect matching of the points of a PairingSpace, stored in canonical
/// order: each pair ascending, pairs ascending by first point.
class Pairing {
 public:
  // Validates that `pairs` is a perfect matching of space's points and
  // canonicalizes the order. Throws std::invalid_argument otherwise.
  Pairing(const PairingSpace& space, std::vector<PointPair> pairs);

  const std::vector<PointPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }

  bool operator==(const Pairing&) const = default;

 private:
  struct Trusted {};
  Pairing(Trusted, std::vector<PointPair> pairs) : pairs_(std::move(pairs)) {}
  friend Pairing sample_uniform(const PairingSpace&, std::uint64_t);
  friend void enumerate_all(const PairingSpace&, const std::function<void(const Pairing&)>&, std::uint32_t);

  std::vector<PointPair> pairs_;
};

/// Uniform random pairing: the lowest unmatched point is paired with a
/// uniformly chosen other unmatched point until all are matched. Same seed,
/// same pairing.
Pairing sample_uniform(const PairingSpace& space, std::uint64_t seed);

inline constexpr std::uint32_t kDefaultEnumerationCap = 16;

/// Calls visit once for every pairing of space, in lexicographic order.
/// Throws std::length_error when d*n exceeds point_cap.
void enumerate_all(const PairingSpace& space, const std::function<void(const Pairing&)>& visit,
                   std::uint32_t point_cap = kDefaultEnumerationCap);

/// The pseudograph G(P): cells become vertices, pairs become edges.
MultiGraph project(const PairingSpace& space, const Pairing& pairing);

void write_pairing(std::ostream& out, const Pairing& pairing);
Pairing read_pairing(const PairingSpace& space, std::istream& in);

}  // namespace starfactor
