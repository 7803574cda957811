#pragma once

// Plucker embedding of G(k, n) and the rows of its tangent-space generators.
//
// A point is a full-rank (k+1) x (n+1) matrix A; its Plucker vector lists the
// maximal minors in subset-table order. The tangent direction obtained by
// substituting basis row e_j into row i of A has Plucker coordinates that are
// cofactor expansions of the original minors, so they can be read off from
// the k x k minors of A-without-row-i instead of recomputing determinants.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "terracini/combinatorics.hpp"
#include "terracini/matrix.hpp"

namespace terracini {

namespace detail {

// Determinant of a small square matrix, destroying the scratch buffer.
// Exact fields pick the first nonzero pivot; floats pick the largest.
template <class F>
typename F::Element det_destructive(const F& f, DenseMatrix<typename F::Element>& m) {
  using E = typename F::Element;
  const std::size_t d = m.rows();
  switch (d) {
    case 0: return f.one();
    case 1: return m(0, 0);
    case 2: return f.sub(f.mul(m(0, 0), m(1, 1)), f.mul(m(0, 1), m(1, 0)));
    case 3: {
      E t0 = f.mul(m(0, 0), f.sub(f.mul(m(1, 1), m(2, 2)), f.mul(m(1, 2), m(2, 1))));
      E t1 = f.mul(m(0, 1), f.sub(f.mul(m(1, 0), m(2, 2)), f.mul(m(1, 2), m(2, 0))));
      E t2 = f.mul(m(0, 2), f.sub(f.mul(m(1, 0), m(2, 1)), f.mul(m(1, 1), m(2, 0))));
      return f.add(f.sub(t0, t1), t2);
    }
    default: break;
  }
  bool negate = false;
  E det = f.one();
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = d;
    if constexpr (F::exact) {
      for (std::size_t r = col; r < d; ++r)
        if (!f.is_zero(m(r, col))) { piv = r; break; }
    } else {
      double best = 0.0;
      for (std::size_t r = col; r < d; ++r) {
        double a = m(r, col) < 0 ? -double(m(r, col)) : double(m(r, col));
        if (a > best) { best = a; piv = r; }
      }
    }
    if (piv == d) return f.zero();
    if (piv != col) { m.swap_rows(piv, col); negate = !negate; }
    E pivot = m(col, col);
    E pinv = f.inv(pivot);
    for (std::size_t r = col + 1; r < d; ++r) {
      if (f.is_zero(m(r, col))) continue;
      E factor = f.mul(m(r, col), pinv);
      for (std::size_t c = col + 1; c < d; ++c)
        m(r, c) = f.sub(m(r, c), f.mul(factor, m(col, c)));
    }
    det = f.mul(det, pivot);
  }
  return negate ? f.neg(det) : det;
}

// Determinant of the square submatrix of `a` formed by all its rows and the
// given columns. `scratch` must be rows x rows.
template <class F>
typename F::Element minor_det(const F& f, const DenseMatrix<typename F::Element>& a,
                              std::span<const int> cols,
                              DenseMatrix<typename F::Element>& scratch) {
  const std::size_t d = a.rows();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) scratch(r, c) = a(r, cols[c]);
  return det_destructive(f, scratch);
}

}  // namespace detail

inline void validate_point_shape(std::size_t rows, std::size_t cols, const SubsetTable& table) {
  if (rows != static_cast<std::size_t>(table.subset_size()) ||
      cols != static_cast<std::size_t>(table.ground_size()))
    throw std::invalid_argument("point matrix shape does not match subset table");
  if (rows == 0 || rows > cols)
    throw std::invalid_argument("point matrix must be (k+1) x (n+1) with k < n+1");
}

// Plucker vector of A: entry c is det of the columns table.subset(c), in
// table order.
template <class F>
std::vector<typename F::Element> plucker_embed(const F& f,
                                               const DenseMatrix<typename F::Element>& a,
                                               const SubsetTable& table) {
  using E = typename F::Element;
  validate_point_shape(a.rows(), a.cols(), table);
  const std::size_t d = a.rows();
  DenseMatrix<E> scratch(d, d);
  std::vector<E> out(table.size());
  for (std::size_t c = 0; c < table.size(); ++c)
    out[c] = detail::minor_det(f, a, table.subset(c), scratch);
  return out;
}

template <class F>
bool plucker_is_nonzero(const F& f, const DenseMatrix<typename F::Element>& a,
                        const SubsetTable& table) {
  using E = typename F::Element;
  validate_point_shape(a.rows(), a.cols(), table);
  const std::size_t d = a.rows();
  DenseMatrix<E> scratch(d, d);
  for (std::size_t c = 0; c < table.size(); ++c)
    if (!f.is_zero(detail::minor_det(f, a, table.subset(c), scratch))) return true;
  return false;
}

// Plucker vector of A with row i replaced by the j-th standard basis row,
// computed by cofactor expansion: the coordinate at a subset S is zero
// unless j is in S, and otherwise equals +/- the k x k minor of
// A-without-row-i on the columns S \ {j}. Sign is (-1)^(i + position of j
// in S). Agrees with plucker_embed of the substituted matrix.
template <class F>
std::vector<typename F::Element> substituted_minor_row(
    const F& f, const DenseMatrix<typename F::Element>& a, int i, int j,
    const SubsetTable& table) {
  using E = typename F::Element;
  validate_point_shape(a.rows(), a.cols(), table);
  const int k = table.subset_size() - 1;
  const int n = table.ground_size() - 1;
  if (i < 0 || i > k) throw std::out_of_range("substituted_minor_row: row index");
  if (j < 0 || j > n) throw std::out_of_range("substituted_minor_row: basis index");

  DenseMatrix<E> rest(k, n + 1);  // A without row i
  for (int r = 0, rr = 0; r <= k; ++r) {
    if (r == i) continue;
    for (int c = 0; c <= n; ++c) rest(rr, c) = a(r, c);
    ++rr;
  }

  DenseMatrix<E> scratch(k, k);
  std::vector<int> subcols(k);
  std::vector<E> out(table.size(), f.zero());
  for (std::size_t c = 0; c < table.size(); ++c) {
    auto s = table.subset(c);
    int pos = -1;
    for (int t = 0; t <= k; ++t)
      if (s[t] == j) { pos = t; break; }
    if (pos < 0) continue;
    for (int t = 0, u = 0; t <= k; ++t)
      if (t != pos) subcols[u++] = s[t];
    E minor = detail::minor_det(f, rest, subcols, scratch);
    out[c] = ((i + pos) & 1) ? f.neg(minor) : minor;
  }
  return out;
}

// Shared combinatorial index for one Grassmannian shape (k, n): the Plucker
// subset table, the k-subset table of the minors, and for every (subset,
// position) pair the ordinal of the subset with that position removed.
// Precomputing this once lets tangent blocks be filled by table lookup.
class MinorIndex {
 public:
  MinorIndex(int n, int k)
      : n_(n), k_(k), big_(build_subset_table(n, k)), small_(n + 1, k) {
    sub_ordinal_.resize(big_.size() * static_cast<std::size_t>(k + 1));
    std::vector<int> reduced(k);
    for (std::size_t c = 0; c < big_.size(); ++c) {
      auto s = big_.subset(c);
      for (int t = 0; t <= k; ++t) {
        for (int u = 0, v = 0; u <= k; ++u)
          if (u != t) reduced[v++] = s[u];
        sub_ordinal_[c * (k + 1) + t] =
            static_cast<std::uint32_t>(small_.index_of(reduced));
      }
    }
  }

  int n() const { return n_; }
  int k() const { return k_; }
  const SubsetTable& plucker_table() const { return big_; }
  const SubsetTable& minor_table() const { return small_; }

  std::uint32_t minor_ordinal(std::size_t subset_ordinal, int position) const {
    return sub_ordinal_[subset_ordinal * (k_ + 1) + position];
  }

 private:
  int n_;
  int k_;
  SubsetTable big_;
  SubsetTable small_;
  std::vector<std::uint32_t> sub_ordinal_;
};

}  // namespace terracini
