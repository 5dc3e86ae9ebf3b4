#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qap/linalg.hpp"
#include "qap/perm.hpp"
#include "qap/rng.hpp"

using namespace qap;

namespace {

DenseMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, long span = 9) {
  DenseMatrix m(rows, cols);
  for (auto& v : m.data) v = make_rational(rng.int_in(-span, span));
  return m;
}

Rational dot(const DenseMatrix& m, std::size_t row, const std::vector<Rational>& v) {
  Rational acc = 0;
  for (std::size_t c = 0; c < m.cols; ++c) acc += m.at(row, c) * v[c];
  return acc;
}

}  // namespace

TEST_CASE("rank basics") {
  DenseMatrix id3(3, 3);
  for (int i = 0; i < 3; ++i) id3.at(i, i) = 1;
  CHECK(rank(id3, RankMode::exact) == 3);
  CHECK(rank(id3, RankMode::modp) == 3);

  DenseMatrix z(4, 5);
  CHECK(rank(z, RankMode::exact) == 0);
  CHECK(rank(z, RankMode::modp) == 0);
}

TEST_CASE("rank of the vectorized 4x4 permutation matrices") {
  auto perms = enumerate_permutations(4);
  DenseMatrix m(perms.size(), 16);
  for (std::size_t r = 0; r < perms.size(); ++r)
    for (int i = 0; i < 4; ++i) m.at(r, static_cast<std::size_t>(cell_index(4, i, perms[r](i)))) = 1;
  CHECK(rank(m, RankMode::exact) == 10);  // (n-1)^2 + 1
  CHECK(rank(m, RankMode::modp) == 10);
}

TEST_CASE("rank invariances on seeded matrices") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t rows = 2 + rng.below(6), cols = 2 + rng.below(6);
    DenseMatrix m = random_matrix(rng, rows, cols);
    std::size_t r = rank(m, RankMode::exact);
    CHECK(rank(m.transposed(), RankMode::exact) == r);

    DenseMatrix scaled = m;
    for (std::size_t i = 0; i < rows; ++i) {
      Rational f = make_rational(rng.int_in(1, 5), rng.int_in(1, 5));
      for (std::size_t c = 0; c < cols; ++c) scaled.at(i, c) *= f;
    }
    CHECK(rank(scaled, RankMode::exact) == r);

    DenseMatrix shuffled = m;
    for (std::size_t i = rows; i > 1; --i) {
      std::size_t j = rng.below(i);
      for (std::size_t c = 0; c < cols; ++c) std::swap(shuffled.at(i - 1, c), shuffled.at(j, c));
    }
    CHECK(rank(shuffled, RankMode::exact) == r);
  }
}

TEST_CASE("exact and modp ranks agree on a Monte Carlo sweep") {
  Rng rng(11);
  int agree = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    std::size_t rows = 1 + rng.below(8), cols = 1 + rng.below(8);
    DenseMatrix m = random_matrix(rng, rows, cols);
    if (rank(m, RankMode::exact) == rank(m, RankMode::modp, ModpOptions{2, rng.next()})) ++agree;
  }
  CHECK(agree >= trials * 999 / 1000);
}

TEST_CASE("nullspace vector") {
  DenseMatrix id2(2, 2);
  id2.at(0, 0) = 1;
  id2.at(1, 1) = 1;
  CHECK_FALSE(nullspace_vector(id2).has_value());

  DenseMatrix row(1, 2);
  row.at(0, 0) = 1;
  row.at(0, 1) = 1;
  auto v = nullspace_vector(row);
  REQUIRE(v.has_value());
  CHECK((*v)[0] == -(*v)[1]);
  CHECK((*v)[0] != 0);

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    // rank-deficient by construction: 4 rows in a 2-dim row space, 5 cols
    DenseMatrix basis = random_matrix(rng, 2, 5);
    DenseMatrix m(4, 5);
    for (std::size_t r = 0; r < 4; ++r) {
      Rational a = make_rational(rng.int_in(-3, 3)), b = make_rational(rng.int_in(-3, 3));
      for (std::size_t c = 0; c < 5; ++c) m.at(r, c) = a * basis.at(0, c) + b * basis.at(1, c);
    }
    auto k = nullspace_vector(m);
    REQUIRE(k.has_value());
    bool nonzero = false;
    for (const auto& x : *k) nonzero = nonzero || x != 0;
    CHECK(nonzero);
    for (std::size_t r = 0; r < m.rows; ++r) CHECK(dot(m, r, *k) == 0);
  }
}

TEST_CASE("affine rank") {
  DenseMatrix one(1, 3);
  one.at(0, 0) = 5;
  CHECK(affine_rank(one, RankMode::exact) == 0);

  DenseMatrix two(2, 3);
  two.at(0, 0) = 1;
  two.at(1, 1) = 7;
  CHECK(affine_rank(two, RankMode::exact) == 1);

  DenseMatrix empty;
  CHECK_THROWS_AS(affine_rank(empty, RankMode::exact), std::invalid_argument);
}

TEST_CASE("solve") {
  DenseMatrix id3(3, 3);
  for (int i = 0; i < 3; ++i) id3.at(i, i) = 1;
  std::vector<Rational> b{make_rational(2), make_rational(-1), make_rational(7, 3)};
  auto x = solve(id3, b);
  REQUIRE(x.has_value());
  CHECK(*x == b);

  DenseMatrix zero(2, 2);
  CHECK_FALSE(solve(zero, {make_rational(1), make_rational(0)}).has_value());

  DenseMatrix dep(2, 2);
  dep.at(0, 0) = 1;
  dep.at(0, 1) = 1;
  dep.at(1, 0) = 2;
  dep.at(1, 1) = 2;
  auto y = solve(dep, {make_rational(1), make_rational(2)});
  REQUIRE(y.has_value());
  CHECK((*y)[0] + (*y)[1] == 1);

  CHECK_THROWS_AS(solve(dep, {make_rational(1)}), std::invalid_argument);
}

TEST_CASE("streaming modp rank agrees with the dense path") {
  Rng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t rows = 3 + rng.below(10), cols = 3 + rng.below(10);
    DenseMatrix m = random_matrix(rng, rows, cols, 4);
    std::uint64_t p = modp_prime_pool()[trial % 4];
    auto fill = [&](std::size_t r, std::vector<std::uint64_t>& row) {
      for (std::size_t c = 0; c < cols; ++c) {
        long v = static_cast<long>(m.at(r, c).get_num().get_si());
        row[c] = v >= 0 ? static_cast<std::uint64_t>(v) : p - static_cast<std::uint64_t>(-v);
      }
    };
    CHECK(modp_rank_streaming(rows, cols, fill, p) == modp_rank(m, p));
  }
}
