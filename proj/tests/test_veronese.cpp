#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "terracini/veronese.hpp"

using namespace terracini;

namespace {

// Coefficients of L^k over doubles by repeated convolution: an expansion
// route independent of the multinomial formula under test.
std::vector<double> power_coeffs(std::span<const double> l, int k,
                                 const std::vector<MonomialTable>& tables) {
  const int v = static_cast<int>(l.size());
  std::vector<double> cur = {1.0};
  std::vector<int> shifted(v);
  for (int d = 0; d < k; ++d) {
    const MonomialTable& from = tables[d];
    const MonomialTable& to = tables[d + 1];
    std::vector<double> next(to.size(), 0.0);
    for (std::size_t m = 0; m < from.size(); ++m) {
      auto e = from.exponents(m);
      for (int j = 0; j < v; ++j) {
        for (int t = 0; t < v; ++t) shifted[t] = e[t];
        ++shifted[j];
        next[to.index_of(shifted)] += l[j] * cur[m];
      }
    }
    cur = std::move(next);
  }
  return cur;
}

// Jacobian of L -> coeffs(L^k) by central finite differences. Rows indexed
// by the variable being perturbed.
DenseMatrix<double> fd_jacobian(std::span<const double> l, int k,
                                const std::vector<MonomialTable>& tables) {
  const int v = static_cast<int>(l.size());
  const double h = 1e-5;
  DenseMatrix<double> out(v, tables[k].size());
  std::vector<double> bumped(l.begin(), l.end());
  for (int i = 0; i < v; ++i) {
    bumped[i] = l[i] + h;
    auto up = power_coeffs(bumped, k, tables);
    bumped[i] = l[i] - h;
    auto down = power_coeffs(bumped, k, tables);
    bumped[i] = l[i];
    for (std::size_t c = 0; c < up.size(); ++c) out(i, c) = (up[c] - down[c]) / (2 * h);
  }
  return out;
}

std::vector<MonomialTable> tables_up_to(int v, int k) {
  std::vector<MonomialTable> t;
  for (int d = 0; d <= k; ++d) t.emplace_back(v, d);
  return t;
}

RankBackendConfig exact_cfg(std::uint64_t seed = 0) {
  RankBackendConfig cfg;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("monomial table enumerates descending lexicographic exponents") {
  MonomialTable t(3, 2);
  REQUIRE(t.size() == 6);
  const std::array<std::array<int, 3>, 6> want = {{{2, 0, 0},
                                                   {1, 1, 0},
                                                   {1, 0, 1},
                                                   {0, 2, 0},
                                                   {0, 1, 1},
                                                   {0, 0, 2}}};
  for (std::size_t m = 0; m < 6; ++m) {
    auto e = t.exponents(m);
    for (int j = 0; j < 3; ++j) CHECK(e[j] == want[m][j]);
    CHECK(t.index_of(want[m]) == m);
  }
}

TEST_CASE("monomial table round-trips across shapes") {
  for (int v = 1; v <= 5; ++v)
    for (int d = 0; d <= 6; ++d) {
      MonomialTable t(v, d);
      REQUIRE(t.size() == binomial(d + v - 1, v - 1));
      for (std::size_t m = 0; m < t.size(); ++m) {
        INFO("v=" << v << " d=" << d << " m=" << m);
        REQUIRE(t.index_of(t.exponents(m)) == m);
      }
    }
}

TEST_CASE("monomial table input validation") {
  CHECK_THROWS_AS(MonomialTable(0, 2), std::invalid_argument);
  MonomialTable t(3, 2);
  CHECK_THROWS_AS(t.exponents(6), std::out_of_range);
  const std::array<int, 3> wrong_sum = {1, 0, 0};
  CHECK_THROWS_AS(t.index_of(wrong_sum), std::invalid_argument);
  const std::array<int, 2> wrong_arity = {1, 1};
  CHECK_THROWS_AS(t.index_of(wrong_arity), std::invalid_argument);
}

TEST_CASE("degree-1 tangent block is the identity pattern") {
  PrimeField f(kDefaultPrime);
  MonomialTable t(3, 1);
  const std::array<std::uint32_t, 3> form = {5, 7, 11};
  auto block = veronese_tangent_block(f, form, 1, t);
  REQUIRE(block.rows() == 3);
  REQUIRE(block.cols() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(block(i, j) == (i == j ? 1u : 0u));
}

TEST_CASE("frozen tangent block of a binary quadric") {
  PrimeField f(kDefaultPrime);
  MonomialTable t(2, 2);
  const std::array<std::uint32_t, 2> form = {1, 1};
  auto block = veronese_tangent_block(f, form, 2, t);
  REQUIRE(block.rows() == 2);
  REQUIRE(block.cols() == 3);
  const std::array<std::array<std::uint32_t, 3>, 2> want = {{{1, 1, 0}, {0, 1, 1}}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) CHECK(block(i, j) == want[i][j]);
}

TEST_CASE("tangent block of a generic form has full row rank") {
  PrimeField f(kDefaultPrime);
  MonomialTable t(3, 3);
  std::mt19937 rng(6);
  std::vector<std::uint32_t> form(3);
  for (auto& x : form) x = rng() % f.modulus();
  auto block = veronese_tangent_block(f, std::span<const std::uint32_t>(form), 3, t);
  CHECK(rank_exact(block, f) == 3);
}

TEST_CASE("tangent block rejects malformed input") {
  PrimeField f(kDefaultPrime);
  MonomialTable t(3, 2);
  const std::array<std::uint32_t, 3> zero = {0, 0, 0};
  CHECK_THROWS_AS(veronese_tangent_block(f, zero, 2, t), std::invalid_argument);
  const std::array<std::uint32_t, 2> short_form = {1, 2};
  CHECK_THROWS_AS(veronese_tangent_block(f, short_form, 2, t), std::invalid_argument);
  const std::array<std::uint32_t, 3> ok = {1, 2, 3};
  CHECK_THROWS_AS(veronese_tangent_block(f, ok, 3, t), std::invalid_argument);  // degree mismatch
}

TEST_CASE("tangent block matches the finite-difference jacobian of the power map") {
  RealField f;
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int v = 2; v <= 4; ++v)
    for (int k = 2; k <= 4; ++k) {
      auto tables = tables_up_to(v, k);
      std::vector<double> form(v);
      for (auto& x : form) x = dist(rng);
      auto block = veronese_tangent_block(f, std::span<const double>(form), k, tables[k]);
      auto jac = fd_jacobian(form, k, tables);
      // d(L^k)/dl_i = k L^(k-1) x_i: FD rows are k times the block rows
      for (int i = 0; i < v; ++i)
        for (std::size_t c = 0; c < block.cols(); ++c) {
          INFO("v=" << v << " k=" << k << " i=" << i << " c=" << c);
          REQUIRE(std::abs(jac(i, c) - k * block(i, c)) <=
                  1e-5 * (1.0 + std::abs(jac(i, c))));
        }
    }
}

TEST_CASE("veronese dimension bookkeeping") {
  CHECK(veronese_ambient_dim(4, 2) == 14);
  CHECK(veronese_ambient_dim(3, 4) == 34);
  CHECK(veronese_expected_dim(4, 2, 5) == 14);
  CHECK(veronese_expected_dim(2, 2, 2) == 5);
  CHECK(veronese_saturation_s(4, 2) == 5);
  CHECK(veronese_saturation_s(3, 4) == 7);
  CHECK(veronese_saturation_s(2, 2) == 2);
}

TEST_CASE("known dimensions: quadrics and the sporadic quartic cells") {
  // quadrics: rank-s symmetric matrices
  CHECK(veronese_known_dim(2, 2, 2) == 4);   // conics: pairs of lines
  CHECK(veronese_known_dim(2, 3, 2) == 6);
  CHECK(veronese_known_dim(2, 3, 3) == 8);
  CHECK(veronese_known_dim(2, 4, 2) == 8);
  CHECK(veronese_known_dim(2, 2, 3) == 5);   // fills
  // sporadic cells, each one short of filling or of the expected count
  CHECK(veronese_known_dim(4, 2, 5) == 13);
  CHECK(veronese_known_dim(4, 3, 9) == 33);
  CHECK(veronese_known_dim(4, 4, 14) == 68);
  CHECK(veronese_known_dim(3, 4, 7) == 33);
  // a generic nondefective cell
  CHECK(veronese_known_dim(3, 2, 3) == veronese_expected_dim(3, 2, 3));
}

TEST_CASE("sporadic and quadric dimensions agree with the finite-difference span oracle") {
  // Independent of the registry and of the exact pipeline: stack FD
  // jacobians at s random forms and count singular values.
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const std::array<std::array<int, 3>, 6> cells = {{
      {4, 2, 5}, {4, 3, 9}, {3, 4, 7},  // sporadic
      {2, 3, 2}, {2, 3, 3},             // quadric closed form
      {3, 2, 3},                        // nondefective control
  }};
  for (const auto& [k, n, s] : cells) {
    auto tables = tables_up_to(n + 1, k);
    DenseMatrix<double> stack(static_cast<std::size_t>(s) * (n + 1), tables[k].size());
    for (int pt = 0; pt < s; ++pt) {
      std::vector<double> form(n + 1);
      for (auto& x : form) x = dist(rng);
      auto jac = fd_jacobian(form, k, tables);
      for (int i = 0; i <= n; ++i)
        for (std::size_t c = 0; c < jac.cols(); ++c)
          stack(static_cast<std::size_t>(pt) * (n + 1) + i, c) = jac(i, c);
    }
    const std::size_t r = rank_float(stack, 1e-7);
    INFO("cell (" << k << "," << n << "," << s << ")");
    CHECK(static_cast<std::int64_t>(r) - 1 == veronese_known_dim(k, n, s));
  }
}

TEST_CASE("classify the smallest sporadic veronese cell") {
  ScanRecord rec = veronese_classify(4, 2, 5, exact_cfg());
  CHECK(rec.N == 14);
  CHECK(rec.S == 5);
  CHECK(rec.expected == 14);
  CHECK(rec.computed == 13);
  CHECK(rec.defect == 1);
  CHECK(rec.status == CellStatus::oracle_confirmed_defective);
}

TEST_CASE("classify veronese cells across statuses") {
  ScanRecord full = veronese_classify(3, 2, 4, exact_cfg());
  CHECK(full.computed == 9);
  CHECK(full.defect == 0);
  CHECK(full.status == CellStatus::certified_nondefective);

  ScanRecord quad = veronese_classify(2, 3, 3, exact_cfg());
  CHECK(quad.computed == 8);
  CHECK(quad.defect == 1);
  CHECK(quad.status == CellStatus::oracle_confirmed_defective);

  RankBackendConfig fl;
  fl.mode = RankMode::float_svd;
  fl.seed = 2;
  ScanRecord rec = veronese_classify(4, 2, 5, fl);
  CHECK(rec.computed == 13);
  CHECK(rec.status == CellStatus::oracle_confirmed_defective);
}

TEST_CASE("mini sweep finds exactly the known defective veronese cells") {
  std::set<std::array<int, 3>> defective;
  for (int k = 1; k <= 4; ++k)
    for (int n = 1; n <= 3; ++n) {
      const int S = veronese_saturation_s(k, n);
      for (int s = 2; s <= S; ++s) {
        ScanRecord rec = veronese_classify(k, n, s, exact_cfg());
        if (rec.defect > 0) defective.insert({k, n, s});
      }
    }
  const std::set<std::array<int, 3>> want = {
      {2, 2, 2}, {2, 3, 2}, {2, 3, 3}, {4, 2, 5}, {4, 3, 9}};
  CHECK(defective == want);
}
