#pragma once

// Veronese cross-check: secants of the degree-k Veronese of P^n, i.e.
// symmetric tensor rank. The tangent space at [L^k] is spanned by
// L^(k-1) x_i, so the tangent block of a linear form L has rows indexed by
// the variables and columns by the degree-k monomials. The classification
// here is complete (all defective cells are known), which makes this family
// an end-to-end oracle for the whole rank pipeline.

#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "terracini/combinatorics.hpp"
#include "terracini/rank.hpp"
#include "terracini/scan.hpp"

namespace terracini {

// Exponent tuples of total degree `degree` in `n_vars` variables, in
// descending lexicographic order (so x0^d comes first), with the inverse
// ranking map.
class MonomialTable {
 public:
  MonomialTable(int n_vars, int degree) : v_(n_vars), d_(degree) {
    if (v_ < 1 || d_ < 0)
      throw std::invalid_argument("MonomialTable: need n_vars >= 1, degree >= 0");
    count_ = static_cast<std::size_t>(
        binomial(static_cast<unsigned>(d_ + v_ - 1), static_cast<unsigned>(v_ - 1)));
    flat_.reserve(count_ * static_cast<std::size_t>(v_));
    std::vector<int> cur(v_, 0);
    emit(cur, 0, d_);
  }

  int n_vars() const { return v_; }
  int degree() const { return d_; }
  std::size_t size() const { return count_; }

  std::span<const int> exponents(std::size_t ordinal) const {
    if (ordinal >= count_) throw std::out_of_range("MonomialTable::exponents");
    return {flat_.data() + ordinal * static_cast<std::size_t>(v_),
            static_cast<std::size_t>(v_)};
  }

  std::size_t index_of(std::span<const int> e) const {
    if (e.size() != static_cast<std::size_t>(v_))
      throw std::invalid_argument("MonomialTable::index_of: wrong arity");
    std::size_t rank = 0;
    int remaining = d_;
    for (int pos = 0; pos < v_ - 1; ++pos) {
      const int ei = e[pos];
      if (ei < 0 || ei > remaining)
        throw std::invalid_argument("MonomialTable::index_of: exponents do not sum to degree");
      // tuples whose entry here exceeds ei come first in descending lex
      for (int c = remaining; c > ei; --c)
        rank += static_cast<std::size_t>(binomial(
            static_cast<unsigned>((remaining - c) + (v_ - pos - 2)),
            static_cast<unsigned>(v_ - pos - 2)));
      remaining -= ei;
    }
    if (e[v_ - 1] != remaining)
      throw std::invalid_argument("MonomialTable::index_of: exponents do not sum to degree");
    return rank;
  }

 private:
  void emit(std::vector<int>& cur, int pos, int left) {
    if (pos == v_ - 1) {
      cur[pos] = left;
      flat_.insert(flat_.end(), cur.begin(), cur.end());
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[pos] = e;
      emit(cur, pos + 1, left - e);
    }
  }

  int v_;
  int d_;
  std::size_t count_ = 0;
  std::vector<int> flat_;
};

namespace detail {

// d! / (prod e_i!) as a field element: a product of binomials of the
// partial sums, each exact in 64 bits for d <= 64, reduced into the field
// factor by factor so the full product never overflows.
template <class F>
typename F::Element multinomial_in(const F& f, int d, std::span<const int> e) {
  typename F::Element acc = f.one();
  unsigned partial = 0;
  for (int x : e) {
    partial += static_cast<unsigned>(x);
    acc = f.mul(acc, f.from_int(static_cast<long long>(
                    binomial(partial, static_cast<unsigned>(x)))));
  }
  if (partial != static_cast<unsigned>(d))
    throw std::invalid_argument("multinomial_in: exponents do not sum to degree");
  return acc;
}

}  // namespace detail

// Tangent block at the power [L^k]: row i lists the coefficients of
// L^(k-1) x_i in the degree-k monomial basis. With L = sum l_j x_j the
// coefficient of x^(b + e_i) in L^(k-1) x_i is multinomial(k-1, b) l^b.
template <class F>
DenseMatrix<typename F::Element> veronese_tangent_block(
    const F& f, std::span<const typename F::Element> linear_form, int degree,
    const MonomialTable& table) {
  using E = typename F::Element;
  const int nv = table.n_vars();
  if (degree < 1) throw std::invalid_argument("veronese_tangent_block: need degree >= 1");
  if (degree > 64)
    throw std::invalid_argument("veronese_tangent_block: degree > 64 overflows coefficients");
  if (table.degree() != degree)
    throw std::invalid_argument("veronese_tangent_block: table degree mismatch");
  if (linear_form.size() != static_cast<std::size_t>(nv))
    throw std::invalid_argument("veronese_tangent_block: form arity mismatch");
  bool all_zero = true;
  for (const E& c : linear_form)
    if (!f.is_zero(c)) { all_zero = false; break; }
  if (all_zero) throw std::invalid_argument("veronese_tangent_block: zero linear form");

  MonomialTable lower(nv, degree - 1);
  DenseMatrix<E> out(nv, table.size());
  std::vector<int> shifted(nv);
  for (std::size_t b = 0; b < lower.size(); ++b) {
    auto exps = lower.exponents(b);
    E coeff = detail::multinomial_in(f, degree - 1, exps);
    for (int j = 0; j < nv; ++j) {
      E pw = f.one();
      for (int t = 0; t < exps[j]; ++t) pw = f.mul(pw, linear_form[j]);
      coeff = f.mul(coeff, pw);
    }
    for (int i = 0; i < nv; ++i) {
      for (int j = 0; j < nv; ++j) shifted[j] = exps[j];
      ++shifted[i];
      out(i, table.index_of(shifted)) = coeff;
    }
  }
  return out;
}

inline std::int64_t veronese_ambient_dim(int k, int n) {
  return static_cast<std::int64_t>(
             binomial(static_cast<unsigned>(k + n), static_cast<unsigned>(n))) -
         1;
}

inline std::int64_t veronese_expected_dim(int k, int n, int s) {
  if (k < 1 || n < 1) throw std::invalid_argument("veronese_expected_dim: need k, n >= 1");
  if (s < 1) throw std::invalid_argument("veronese_expected_dim: need s >= 1");
  return std::min(veronese_ambient_dim(k, n),
                  static_cast<std::int64_t>(s) * (n + 1) - 1);
}

inline int veronese_saturation_s(int k, int n) {
  const std::int64_t N = veronese_ambient_dim(k, n);
  return static_cast<int>((N + n + 1) / (n + 1));  // ceil((N + 1)/(n + 1))
}

// Complete classification of defective Veronese cells: quadrics (k = 2)
// with the explicit rank formula, and four sporadic cells, each of
// defect 1. Everything else attains the expected dimension, so this
// registry pins every cell.
inline std::int64_t veronese_known_dim(int k, int n, int s) {
  const std::int64_t expected = veronese_expected_dim(k, n, s);
  if (k == 2) {
    const int m = n + 2 - s;
    const std::int64_t drop =
        m >= 2 ? static_cast<std::int64_t>(binomial(static_cast<unsigned>(m), 2u)) : 0;
    return std::min(expected, veronese_ambient_dim(2, n) - drop);
  }
  static constexpr SporadicDefect sporadic[] = {
      {4, 2, 5, 1}, {4, 3, 9, 1}, {4, 4, 14, 1}, {3, 4, 7, 1}};
  for (const auto& d : sporadic)
    if (d.k == k && d.n == n && d.s == s) return expected - d.defect;
  return expected;
}

// Veronese analogue of classify_cell; k doubles as the degree. The record
// reuses the secant-scan schema.
inline ScanRecord veronese_classify(int k, int n, int s, const RankBackendConfig& cfg) {
  if (k < 1 || n < 1) throw std::invalid_argument("veronese_classify: need k, n >= 1");
  if (s < 1) throw std::invalid_argument("veronese_classify: need s >= 1");
  MonomialTable table(n + 1, k);

  ScanRecord rec;
  rec.k = k;
  rec.n = n;
  rec.s = s;
  rec.N = veronese_ambient_dim(k, n);
  rec.S = veronese_saturation_s(k, n);
  rec.expected = veronese_expected_dim(k, n, s);
  rec.mode = cfg.mode;
  rec.prime = cfg.mode == RankMode::exact_prime ? cfg.prime : 0;
  rec.seed = cfg.seed;

  RankBackendConfig cell_cfg = cfg;
  cell_cfg.seed = mix_seed(detail::cell_seed(cfg.seed, k, n, s), 0x76657273ull);
  const std::size_t cap = static_cast<std::size_t>(rec.expected) + 1;

  auto build = [&](std::uint64_t seed, const auto& f) {
    using E = typename std::decay_t<decltype(f)>::Element;
    RandomPointSource src(seed, cfg.float_bound);
    DenseMatrix<E> m(static_cast<std::size_t>(s) * (n + 1), table.size());
    std::vector<E> form(n + 1);
    for (int pt = 0; pt < s; ++pt) {
      int failures = 0;
      for (;;) {
        bool nonzero = false;
        for (int j = 0; j <= n; ++j) {
          form[j] = src.next(f);
          if (!f.is_zero(form[j])) nonzero = true;
        }
        if (nonzero) break;
        if (++failures >= 8)
          throw SamplingError("veronese_classify: repeated zero linear forms");
      }
      DenseMatrix<E> block = veronese_tangent_block(
          f, std::span<const E>(form.data(), form.size()), k, table);
      for (int i = 0; i <= n; ++i)
        for (std::size_t c = 0; c < table.size(); ++c)
          m(static_cast<std::size_t>(pt) * (n + 1) + i, c) = block(i, c);
    }
    return m;
  };

  RankResult rr = certified_rank(build, cell_cfg, cap);
  rec.computed = static_cast<std::int64_t>(rr.rank) - 1;
  rec.trials = static_cast<int>(rr.per_trial_ranks.size());
  rec.per_trial_ranks = std::move(rr.per_trial_ranks);
  if (rec.computed > rec.expected) {
    if (cfg.mode == RankMode::exact_prime)
      throw std::logic_error("veronese_classify: exact rank above the parameter-count bound");
    throw std::runtime_error(
        "veronese_classify: float rank exceeds the parameter-count bound; tolerance too tight");
  }
  rec.defect = static_cast<int>(rec.expected - rec.computed);

  const std::int64_t known = veronese_known_dim(k, n, s);
  if (cfg.mode == RankMode::exact_prime && rec.computed != known) {
    std::ostringstream msg;
    msg << "registry contradiction at veronese (k=" << k << ", n=" << n << ", s=" << s
        << "): computed " << rec.computed << ", classification gives " << known;
    throw RegistryContradiction(msg.str());
  }
  if (rec.defect == 0) {
    rec.status = cfg.mode == RankMode::exact_prime ? CellStatus::certified_nondefective
                                                   : CellStatus::presumed_nondefective;
  } else {
    rec.status = known == rec.computed ? CellStatus::oracle_confirmed_defective
                                       : CellStatus::candidate_defective;
  }
  return rec;
}

}  // namespace terracini
