#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdint>
#include <vector>

#include "terracini/combinatorics.hpp"

using terracini::binomial;
using terracini::build_subset_table;
using terracini::SubsetTable;

namespace {

// Independent oracle: additive Pascal recurrence, no shared code with the
// multiplicative implementation.
std::vector<std::vector<std::uint64_t>> pascal_triangle(unsigned max_a) {
  std::vector<std::vector<std::uint64_t>> p(max_a + 1);
  for (unsigned a = 0; a <= max_a; ++a) {
    p[a].assign(a + 1, 1);
    for (unsigned b = 1; b < a; ++b) p[a][b] = p[a - 1][b - 1] + p[a - 1][b];
  }
  return p;
}

}  // namespace

TEST_CASE("binomial matches the Pascal recurrence up to a = 64") {
  auto p = pascal_triangle(64);
  for (unsigned a = 0; a <= 64; ++a)
    for (unsigned b = 0; b <= a; ++b) {
      INFO("a=" << a << " b=" << b);
      REQUIRE(binomial(a, b) == p[a][b]);
    }
}

TEST_CASE("binomial known values and edge cases") {
  CHECK(binomial(15, 6) == 5005);
  CHECK(binomial(7, 0) == 1);
  CHECK(binomial(12, 4) == 495);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(64, 32) == 1832624140942590534ull);
  CHECK_THROWS_AS(binomial(65, 1), std::invalid_argument);
}

TEST_CASE("subset table for lines in P^3 lists pairs lexicographically") {
  SubsetTable t = build_subset_table(3, 1);
  REQUIRE(t.size() == 6);
  const std::array<std::array<int, 2>, 6> want = {
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  for (std::size_t c = 0; c < 6; ++c) {
    auto s = t.subset(c);
    CHECK(s[0] == want[c][0]);
    CHECK(s[1] == want[c][1]);
  }
}

TEST_CASE("subset table ordinals agree with exhaustive enumeration") {
  // triples from {0..5}, enumerated by independent nested loops
  SubsetTable t = build_subset_table(5, 2);
  REQUIRE(t.size() == binomial(6, 3));
  std::size_t ordinal = 0;
  for (int a = 0; a <= 5; ++a)
    for (int b = a + 1; b <= 5; ++b)
      for (int c = b + 1; c <= 5; ++c) {
        auto s = t.subset(ordinal);
        REQUIRE(s[0] == a);
        REQUIRE(s[1] == b);
        REQUIRE(s[2] == c);
        const std::array<int, 3> tuple = {a, b, c};
        REQUIRE(t.index_of(tuple) == ordinal);
        ++ordinal;
      }
  REQUIRE(ordinal == t.size());
  REQUIRE(t.subset(0)[0] == 0);  // first subset is {0,1,2}
}

TEST_CASE("subset table size matches binomial for the survey shapes") {
  SubsetTable t = build_subset_table(6, 2);
  REQUIRE(t.size() == 35);
  SubsetTable big = build_subset_table(14, 5);
  REQUIRE(big.size() == 5005);
}

TEST_CASE("index_of round-trips over every subset for all small shapes") {
  for (int g = 1; g <= 12; ++g)
    for (int m = 0; m <= g; ++m) {
      SubsetTable t(g, m);
      REQUIRE(t.size() == binomial(g, m));
      for (std::size_t c = 0; c < t.size(); ++c)
        REQUIRE(t.index_of(t.subset(c)) == c);
    }
}

TEST_CASE("subset table rejects malformed requests") {
  CHECK_THROWS_AS(build_subset_table(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_subset_table(0, 0), std::invalid_argument);
  SubsetTable t = build_subset_table(4, 1);
  CHECK_THROWS_AS(t.subset(100), std::out_of_range);
  const std::array<int, 2> bad = {3, 1};  // not increasing
  CHECK_THROWS_AS(t.index_of(bad), std::invalid_argument);
  const std::array<int, 2> oob = {1, 9};
  CHECK_THROWS_AS(t.index_of(oob), std::invalid_argument);
  const std::array<int, 3> wrong_size = {0, 1, 2};
  CHECK_THROWS_AS(t.index_of(wrong_size), std::invalid_argument);
}
