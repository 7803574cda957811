#pragma once

// Binomial coefficients and ordered enumeration of fixed-size subsets.
// Subset ordinals index Plucker coordinates everywhere else in the library,
// so the lexicographic order fixed here is a load-bearing contract.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace terracini {

// C(a, b), exact for a <= 64 (intermediate products held in 128 bits).
// Returns 0 when b > a.
constexpr std::uint64_t binomial(unsigned a, unsigned b) {
  if (b > a) return 0;
  if (a > 64) throw std::invalid_argument("binomial: a > 64 would overflow");
  if (b > a - b) b = a - b;
  unsigned __int128 acc = 1;
  for (unsigned i = 1; i <= b; ++i) {
    acc = acc * (a - b + i) / i;  // divisible at each step: acc is C(a-b+i, i)
  }
  return static_cast<std::uint64_t>(acc);
}

// All size-m subsets of {0, ..., g-1} in lexicographic order of the sorted
// tuples, plus the inverse (tuple -> ordinal) via the combinatorial ranking
// formula. Immutable after construction.
class SubsetTable {
 public:
  SubsetTable(int ground_size, int subset_size)
      : g_(ground_size), m_(subset_size) {
    if (g_ < 0 || m_ < 0 || m_ > g_)
      throw std::invalid_argument("SubsetTable: need 0 <= subset_size <= ground_size");
    count_ = binomial(static_cast<unsigned>(g_), static_cast<unsigned>(m_));
    flat_.reserve(count_ * static_cast<std::size_t>(m_));
    std::vector<int> cur(m_);
    for (int t = 0; t < m_; ++t) cur[t] = t;
    for (std::size_t c = 0; c < count_; ++c) {
      flat_.insert(flat_.end(), cur.begin(), cur.end());
      // advance to the next combination
      int t = m_ - 1;
      while (t >= 0 && cur[t] == g_ - m_ + t) --t;
      if (t < 0) break;
      ++cur[t];
      for (int u = t + 1; u < m_; ++u) cur[u] = cur[u - 1] + 1;
    }
  }

  int ground_size() const { return g_; }
  int subset_size() const { return m_; }
  std::size_t size() const { return count_; }

  std::span<const int> subset(std::size_t ordinal) const {
    if (ordinal >= count_) throw std::out_of_range("SubsetTable::subset: ordinal out of range");
    if (m_ == 0) return {};
    return {flat_.data() + ordinal * static_cast<std::size_t>(m_),
            static_cast<std::size_t>(m_)};
  }

  // Ordinal of a sorted tuple. Throws if the tuple is not a strictly
  // increasing sequence of m_ values in [0, g_).
  std::size_t index_of(std::span<const int> tuple) const {
    if (tuple.size() != static_cast<std::size_t>(m_))
      throw std::invalid_argument("SubsetTable::index_of: wrong tuple size");
    std::size_t rank = 0;
    int prev = -1;
    for (int pos = 0; pos < m_; ++pos) {
      const int v = tuple[pos];
      if (v <= prev || v >= g_)
        throw std::invalid_argument("SubsetTable::index_of: tuple not strictly increasing in range");
      for (int c = prev + 1; c < v; ++c)
        rank += binomial(static_cast<unsigned>(g_ - 1 - c),
                         static_cast<unsigned>(m_ - 1 - pos));
      prev = v;
    }
    return rank;
  }

 private:
  int g_;
  int m_;
  std::size_t count_ = 0;
  std::vector<int> flat_;
};

// Table of the (k+1)-element subsets of {0..n}: the Plucker coordinate index
// set of G(k, n). Validates the Grassmannian-shaped preconditions.
inline SubsetTable build_subset_table(int n, int k) {
  if (n < 1) throw std::invalid_argument("build_subset_table: need n >= 1");
  if (k < 0 || k > n) throw std::invalid_argument("build_subset_table: need 0 <= k <= n");
  return SubsetTable(n + 1, k + 1);
}

}  // namespace terracini
