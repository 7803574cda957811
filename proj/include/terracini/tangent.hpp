#pragma once

// Random point sampling and assembly of the stacked tangent matrix whose
// rank (minus 1) is the dimension of the s-th secant variety of G(k, n).
//
// For a point A, block M_i lists the Plucker vectors of A with row i
// replaced by each basis row e_j (j = 0..n). The full matrix stacks
// M_0..M_k for each of the s sample points: s(k+1)(n+1) rows, C(n+1, k+1)
// columns. Row order (point, then i, then j) is fixed so runs with equal
// seeds are bit-identical.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "terracini/combinatorics.hpp"
#include "terracini/field.hpp"
#include "terracini/matrix.hpp"
#include "terracini/plucker.hpp"

namespace terracini {

struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// splitmix64 step; derives independent sub-seeds (per cell, per trial) from
// a base seed without correlating the resulting mt19937_64 streams.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seeded stream of field elements. mt19937_64 output is bit-exact per the
// standard; the reductions below are hand-rolled because the standard
// distributions are not portable across library implementations.
class RandomPointSource {
 public:
  explicit RandomPointSource(std::uint64_t seed, double float_bound = 100.0)
      : seed_(seed), bound_(float_bound), engine_(seed) {
    if (!(float_bound > 0.0))
      throw std::invalid_argument("RandomPointSource: float bound must be positive");
  }

  std::uint64_t seed() const { return seed_; }
  double float_bound() const { return bound_; }
  std::uint64_t draws() const { return draws_; }

  // Unbiased draw in [0, p) by rejection.
  std::uint32_t next_mod(std::uint32_t p) {
    const std::uint64_t residue = (0ull - p) % p;  // 2^64 mod p
    const std::uint64_t limit = 0ull - residue;    // largest multiple of p
    for (;;) {
      std::uint64_t x = engine_();
      ++draws_;
      if (residue == 0 || x < limit) return static_cast<std::uint32_t>(x % p);
    }
  }

  // Uniform in (-bound, bound): (u - 0.5) * 2 * bound with u in [0, 1).
  double next_uniform() {
    std::uint64_t x = engine_();
    ++draws_;
    double u = static_cast<double>(x >> 11) * 0x1.0p-53;
    return (u - 0.5) * 2.0 * bound_;
  }

  template <class F>
  typename F::Element next(const F& f) {
    if constexpr (F::exact)
      return next_mod(f.modulus());
    else
      return next_uniform();
  }

 private:
  std::uint64_t seed_;
  double bound_;
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

// Draw s points of G(k, n) as full-rank (k+1) x (n+1) matrices. A draw whose
// Plucker vector vanishes (rank-deficient matrix) is resampled; eight
// consecutive failures abort, which at any sensible field size indicates a
// misconfiguration rather than bad luck.
template <class F>
std::vector<DenseMatrix<typename F::Element>> sample_points(
    const F& f, RandomPointSource& src, int k, int n, int s,
    const SubsetTable& table) {
  if (s < 1) throw std::invalid_argument("sample_points: need s >= 1");
  validate_point_shape(static_cast<std::size_t>(k) + 1,
                       static_cast<std::size_t>(n) + 1, table);
  std::vector<DenseMatrix<typename F::Element>> pts;
  pts.reserve(s);
  int consecutive_failures = 0;
  while (static_cast<int>(pts.size()) < s) {
    DenseMatrix<typename F::Element> a(k + 1, n + 1);
    for (int r = 0; r <= k; ++r)
      for (int c = 0; c <= n; ++c) a(r, c) = src.next(f);
    if (plucker_is_nonzero(f, a, table)) {
      pts.push_back(std::move(a));
      consecutive_failures = 0;
    } else if (++consecutive_failures >= 8) {
      throw SamplingError("sample_points: 8 consecutive rank-deficient draws for G(" +
                          std::to_string(k) + "," + std::to_string(n) + ")");
    }
  }
  return pts;
}

template <class F>
std::vector<DenseMatrix<typename F::Element>> sample_points(const F& f,
                                                            RandomPointSource& src,
                                                            int k, int n, int s) {
  SubsetTable table = build_subset_table(n, k);
  return sample_points(f, src, k, n, s, table);
}

struct Provenance {
  int k = 0;
  int n = 0;
  int s = 0;
  std::uint64_t seed = 0;
  std::string backend;
};

template <class E>
struct TerraciniMatrix {
  DenseMatrix<E> data;
  Provenance provenance;
};

// Block M_i for one point: rows j = 0..n are substituted_minor_row(a, i, j),
// but filled from a single table of the k x k minors of A-without-row-i so
// each minor is computed once and reused across all n+1 rows.
template <class F>
void fill_tangent_block(const F& f, const DenseMatrix<typename F::Element>& a,
                        const MinorIndex& idx,
                        DenseMatrix<typename F::Element>& out,
                        std::size_t row_offset) {
  using E = typename F::Element;
  const int k = idx.k();
  const int n = idx.n();
  const SubsetTable& big = idx.plucker_table();
  const SubsetTable& small = idx.minor_table();

  DenseMatrix<E> rest(k, n + 1);
  DenseMatrix<E> scratch(k, k);
  std::vector<E> minors(small.size());
  for (int i = 0; i <= k; ++i) {
    for (int r = 0, rr = 0; r <= k; ++r) {
      if (r == i) continue;
      for (int c = 0; c <= n; ++c) rest(rr, c) = a(r, c);
      ++rr;
    }
    for (std::size_t m = 0; m < small.size(); ++m)
      minors[m] = detail::minor_det(f, rest, small.subset(m), scratch);
    for (std::size_t c = 0; c < big.size(); ++c) {
      auto s = big.subset(c);
      for (int t = 0; t <= k; ++t) {
        E v = minors[idx.minor_ordinal(c, t)];
        if ((i + t) & 1) v = f.neg(v);
        out(row_offset + static_cast<std::size_t>(i) * (n + 1) + s[t], c) = v;
      }
    }
  }
}

template <class F>
DenseMatrix<typename F::Element> tangent_block(const F& f,
                                               const DenseMatrix<typename F::Element>& a,
                                               const MinorIndex& idx) {
  using E = typename F::Element;
  validate_point_shape(a.rows(), a.cols(), idx.plucker_table());
  DenseMatrix<E> out((idx.k() + 1) * (idx.n() + 1), idx.plucker_table().size());
  fill_tangent_block(f, a, idx, out, 0);
  return out;
}

// Stack the tangent blocks of all points. Point list must be nonempty and
// uniformly shaped.
template <class F>
TerraciniMatrix<typename F::Element> assemble(
    const F& f, const std::vector<DenseMatrix<typename F::Element>>& points,
    const MinorIndex& idx, Provenance prov = {}) {
  using E = typename F::Element;
  if (points.empty()) throw std::invalid_argument("assemble: empty point list");
  const std::size_t block_rows =
      static_cast<std::size_t>(idx.k() + 1) * (idx.n() + 1);
  for (const auto& a : points) validate_point_shape(a.rows(), a.cols(), idx.plucker_table());

  TerraciniMatrix<E> out;
  out.data = DenseMatrix<E>(block_rows * points.size(), idx.plucker_table().size());
  for (std::size_t p = 0; p < points.size(); ++p)
    fill_tangent_block(f, points[p], idx, out.data, p * block_rows);

  prov.k = idx.k();
  prov.n = idx.n();
  prov.s = static_cast<int>(points.size());
  if (prov.backend.empty()) prov.backend = f.id();
  out.provenance = prov;
  return out;
}

// Sample points and assemble in one step; the usual entry point for rank
// queries on a cell (k, n, s).
template <class F>
TerraciniMatrix<typename F::Element> build_terracini(const F& f, const MinorIndex& idx,
                                                     int s, std::uint64_t seed,
                                                     double float_bound = 100.0) {
  RandomPointSource src(seed, float_bound);
  auto pts = sample_points(f, src, idx.k(), idx.n(), s, idx.plucker_table());
  Provenance prov;
  prov.seed = seed;
  prov.backend = f.id();
  return assemble(f, pts, idx, prov);
}

}  // namespace terracini
