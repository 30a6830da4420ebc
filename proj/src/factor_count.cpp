#include "starfactor/factor_count.hpp"

#include <array>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace starfactor {

namespace {

struct Overflow {};

// uint64 arithmetic that throws Overflow instead of wrapping.
struct CheckedU64 {
  std::uint64_t value = 0;

  CheckedU64() = default;
  CheckedU64(std::uint64_t v) : value(v) {}

  friend CheckedU64 operator+(CheckedU64 a, CheckedU64 b) {
    std::uint64_t out;
    if (__builtin_add_overflow(a.value, b.value, &out)) throw Overflow{};
    return out;
  }
  friend CheckedU64 operator*(CheckedU64 a, CheckedU64 b) {
    std::uint64_t out;
    if (__builtin_mul_overflow(a.value, b.value, &out)) throw Overflow{};
    return out;
  }
  CheckedU64& operator+=(CheckedU64 other) { return *this = *this + other; }
  bool is_zero() const { return value == 0; }
};

struct BigAcc {
  BigCount value;
  BigAcc() = default;
  BigAcc(std::uint64_t v) : value(v) {}
  friend BigAcc operator+(const BigAcc& a, const BigAcc& b) { BigAcc r; r.value = a.value + b.value; return r; }
  friend BigAcc operator*(const BigAcc& a, const BigAcc& b) { BigAcc r; r.value = a.value * b.value; return r; }
  BigAcc& operator+=(const BigAcc& other) { value += other.value; return *this; }
  bool is_zero() const { return value.is_zero(); }
};

struct CoverKey {
  std::uint64_t low = 0;
  std::uint64_t high = 0;
  bool operator==(const CoverKey&) const = default;
};

struct CoverKeyHash {
  std::size_t operator()(const CoverKey& key) const {
    std::uint64_t h = key.low * 0x9E3779B97F4A7C15ULL;
    h ^= (key.high + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2));
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

constexpr std::uint32_t kMemoMaxVertices = 128;
constexpr std::size_t kMemoMaxEntries = std::size_t{1} << 22;

template <typename Count>
class FactorSearch {
 public:
  FactorSearch(const MultiGraph& g, bool stop_at_first)
      : g_(g), covered_(g.vertex_count(), 0), stop_at_first_(stop_at_first),
        memoize_(g.vertex_count() <= kMemoMaxVertices) {}

  Count run() { return extend(0); }

 private:
  void cover(std::uint32_t v) {
    covered_[v] = 1;
    if (v < 64) key_.low |= std::uint64_t{1} << v;
    else if (v < 128) key_.high |= std::uint64_t{1} << (v - 64);
  }
  void uncover(std::uint32_t v) {
    covered_[v] = 0;
    if (v < 64) key_.low &= ~(std::uint64_t{1} << v);
    else if (v < 128) key_.high &= ~(std::uint64_t{1} << (v - 64));
  }

  // Uncovered non-loop neighbors of c other than `exclude`.
  void free_neighbors(std::uint32_t c, std::uint32_t exclude, std::vector<Neighbor>& out) const {
    out.clear();
    for (const auto& n : g_.neighbors(c)) {
      if (!covered_[n.vertex] && n.vertex != exclude) out.push_back(n);
    }
  }

  Count extend(std::uint32_t from) {
    const std::uint32_t n = g_.vertex_count();
    while (from < n && covered_[from]) ++from;
    if (from == n) return Count(1);
    if (memoize_) {
      if (auto it = memo_.find(key_); it != memo_.end()) return it->second;
    }

    Count total(0);
    const std::uint32_t v = from;
    cover(v);
    std::vector<Neighbor> around;
    free_neighbors(v, v, around);

    // v is a center.
    for (std::size_t i = 0; i < around.size() && !done(total); ++i) {
      for (std::size_t j = i + 1; j < around.size() && !done(total); ++j) {
        for (std::size_t k = j + 1; k < around.size() && !done(total); ++k) {
          const Count weight = Count(around[i].multiplicity) * Count(around[j].multiplicity) *
                               Count(around[k].multiplicity);
          cover(around[i].vertex);
          cover(around[j].vertex);
          cover(around[k].vertex);
          const Count rest = extend(v + 1);
          if (!rest.is_zero()) total += weight * rest;
          uncover(around[k].vertex);
          uncover(around[j].vertex);
          uncover(around[i].vertex);
        }
      }
    }

    // v is a leaf of center c.
    std::vector<Neighbor> leaves;
    for (std::size_t ci = 0; ci < around.size() && !done(total); ++ci) {
      const std::uint32_t c = around[ci].vertex;
      cover(c);
      free_neighbors(c, v, leaves);
      for (std::size_t i = 0; i < leaves.size() && !done(total); ++i) {
        for (std::size_t j = i + 1; j < leaves.size() && !done(total); ++j) {
          const Count weight = Count(around[ci].multiplicity) * Count(leaves[i].multiplicity) *
                               Count(leaves[j].multiplicity);
          cover(leaves[i].vertex);
          cover(leaves[j].vertex);
          const Count rest = extend(v + 1);
          if (!rest.is_zero()) total += weight * rest;
          uncover(leaves[j].vertex);
          uncover(leaves[i].vertex);
        }
      }
      uncover(c);
    }
    uncover(v);

    if (memoize_ && memo_.size() < kMemoMaxEntries) memo_.emplace(key_, total);
    return total;
  }

  bool done(const Count& total) const { return stop_at_first_ && !total.is_zero(); }

  const MultiGraph& g_;
  std::vector<char> covered_;
  bool stop_at_first_;
  bool memoize_;
  CoverKey key_;
  std::unordered_map<CoverKey, Count, CoverKeyHash> memo_;
};

}  // namespace

StarFactorCount count_3star_factors(const MultiGraph& g) {
  if (g.vertex_count() % 4 != 0) return {BigCount(0)};
  try {
    return {BigCount(FactorSearch<CheckedU64>(g, false).run().value)};
  } catch (const Overflow&) {
    return {FactorSearch<BigAcc>(g, false).run().value};
  }
}

bool has_3star_factor(const MultiGraph& g) {
  if (g.vertex_count() % 4 != 0) return false;
  try {
    return !FactorSearch<CheckedU64>(g, true).run().is_zero();
  } catch (const Overflow&) {
    return !FactorSearch<BigAcc>(g, true).run().is_zero();
  }
}

StarFactorCount oracle_count(const MultiGraph& g) {
  const std::uint32_t n = g.vertex_count();
  if (n > kOracleMaxVertices) throw std::length_error("oracle_count: n > 12 is not supported");
  if (n % 4 != 0) return {BigCount(0)};

  std::vector<std::vector<std::uint64_t>> mult(n, std::vector<std::uint64_t>(n, 0));
  for (const auto& e : g.edges()) {
    if (e.u != e.v) mult[e.u][e.v] = mult[e.v][e.u] = e.multiplicity;
  }
  auto block_weight = [&](const std::array<std::uint32_t, 4>& block) {
    std::uint64_t sum = 0;
    for (int c = 0; c < 4; ++c) {
      std::uint64_t product = 1;
      for (int leaf = 0; leaf < 4; ++leaf) {
        if (leaf != c) product *= mult[block[c]][block[leaf]];
      }
      sum += product;
    }
    return sum;
  };

  std::vector<char> used(n, 0);
  auto partitions = [&](auto&& self) -> BigCount {
    std::uint32_t first = 0;
    while (first < n && used[first]) ++first;
    if (first == n) return BigCount(1);
    BigCount total = 0;
    used[first] = 1;
    for (std::uint32_t a = first + 1; a < n; ++a) {
      if (used[a]) continue;
      for (std::uint32_t b = a + 1; b < n; ++b) {
        if (used[b]) continue;
        for (std::uint32_t c = b + 1; c < n; ++c) {
          if (used[c]) continue;
          const std::uint64_t w = block_weight({first, a, b, c});
          if (w == 0) continue;
          used[a] = used[b] = used[c] = 1;
          total += BigCount(w) * self(self);
          used[a] = used[b] = used[c] = 0;
        }
      }
    }
    used[first] = 0;
    return total;
  };
  return {partitions(partitions)};
}

}  // namespace starfactor
