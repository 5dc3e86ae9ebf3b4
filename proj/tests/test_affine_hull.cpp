#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "qap/affine_hull.hpp"
#include "qap/linalg.hpp"
#include "qap/perm.hpp"

using namespace qap;

TEST_CASE("zero pins show up at n=2") {
  auto sys = build_equation_system(2);
  bool found = false;
  for (const auto& eq : sys.equations)
    if (eq.label == "zero-block-row[Y[11,12]]") {
      found = true;
      REQUIRE(eq.terms.size() == 1);
      CHECK(eq.terms[0].p == cell_index(2, 0, 0));
      CHECK(eq.terms[0].q == cell_index(2, 0, 1));
      CHECK(eq.rhs == 0);
    }
  CHECK(found);
}

TEST_CASE("block-sum instance at n=3 matches the hand expansion") {
  auto sys = build_equation_system(3);
  // (i,j,l) = (1,1,2): Y[11,12] + Y[11,22] + Y[11,32] = Y[11,11]
  auto it = std::find_if(sys.equations.begin(), sys.equations.end(), [](const Equation& eq) {
    return eq.label == "row-sum[i=1,j=1,l=2,partner-rows]";
  });
  REQUIRE(it != sys.equations.end());
  REQUIRE(it->terms.size() == 4);
  int p00 = cell_index(3, 0, 0);
  auto has_term = [&](int p, int q, long num) {
    return std::any_of(it->terms.begin(), it->terms.end(), [&](const EqTerm& t) {
      return t.p == std::min(p, q) && t.q == std::max(p, q) && t.coeff == num;
    });
  };
  CHECK(has_term(p00, cell_index(3, 0, 1), 1));
  CHECK(has_term(p00, cell_index(3, 1, 1), 1));
  CHECK(has_term(p00, cell_index(3, 2, 1), 1));
  CHECK(has_term(p00, p00, -1));
  CHECK(it->rhs == 0);
}

TEST_CASE("every vertex satisfies both coordinate modes") {
  for (int n = 2; n <= 5; ++n) {
    auto canonical = build_equation_system(n, CoordMode::canonical);
    auto full = build_equation_system(n, CoordMode::full);
    for (const auto& p : enumerate_permutations(n)) {
      auto v = vertex(p);
      std::string why;
      CHECK_MESSAGE(satisfies(canonical, v, &why), why);
      CHECK_MESSAGE(satisfies(full, v, &why), why);
    }
  }
}

TEST_CASE("dimension formula") {
  CHECK(dimension_formula(4) == 22);
  CHECK(dimension_formula(5) == 77);
  CHECK(dimension_formula(6) == 206);
  CHECK_THROWS_AS(dimension_formula(3), std::invalid_argument);
}

TEST_CASE("affine dimension matches the formula") {
  CHECK(affine_dimension(4, RankMode::exact) == 22);
  CHECK(affine_dimension(4, RankMode::modp) == 22);
  CHECK(affine_dimension(5, RankMode::exact) == 77);
  CHECK_THROWS_AS(affine_dimension(8, RankMode::modp), std::invalid_argument);
}

TEST_CASE("solution space of the equation system has the hull dimension") {
  // coordinate count minus system rank = affine dimension of the solution set
  {
    auto sys = build_equation_system(4);
    auto m = system_matrix(sys);
    long long dim = canon_count(4) - static_cast<long long>(rank(m, RankMode::exact));
    CHECK(dim == dimension_formula(4));
  }
  {
    auto sys = build_equation_system(5);
    auto m = system_matrix(sys);
    long long dim = canon_count(5) - static_cast<long long>(rank(m, RankMode::modp));
    CHECK(dim == dimension_formula(5));
  }
}

TEST_CASE("decode round-trips every vertex") {
  for (int n = 2; n <= 4; ++n)
    for (const auto& p : enumerate_permutations(n))
      CHECK(decode_01(vertex(p).full_matrix(), n) == p);
}

TEST_CASE("decode rejects corrupted matrices") {
  int n = 3;
  auto good = vertex(Permutation::identity(n)).full_matrix();
  std::size_t side = static_cast<std::size_t>(n) * n;

  // doubled diagonal one inside a row block
  auto two_ones = good;
  int extra = cell_index(n, 0, 1);
  two_ones[static_cast<std::size_t>(extra) * side + static_cast<std::size_t>(extra)] = 1;
  CHECK_THROWS_WITH_AS(decode_01(two_ones, n),
                       doctest::Contains("diagonal block row 1"), DecodeError);

  // clearing a matched off-diagonal entry breaks the reconstruction
  auto flipped = good;
  int p = cell_index(n, 0, 0), q = cell_index(n, 1, 1);
  flipped[static_cast<std::size_t>(p) * side + static_cast<std::size_t>(q)] = 0;
  flipped[static_cast<std::size_t>(q) * side + static_cast<std::size_t>(p)] = 0;
  CHECK_THROWS_WITH_AS(decode_01(flipped, n), doctest::Contains("decoded permutation"),
                       DecodeError);

  // non-binary entry
  auto weird = good;
  weird[1] = 2;
  weird[side] = 2;
  CHECK_THROWS_AS(decode_01(weird, n), DecodeError);

  // asymmetry
  auto asym = good;
  asym[1] = 1 - asym[1];
  CHECK_THROWS_WITH_AS(decode_01(asym, n), doctest::Contains("symmetry"), DecodeError);
}

TEST_CASE("pinned coordinates are exactly the shared-row/column pairs") {
  int n = 3;
  auto pinned = pinned_coordinates(n);
  CHECK(pinned.size() == static_cast<std::size_t>(n) * n * (n - 1));  // n^2(n-1)
  for (long long idx : pinned) {
    bool matched = false;
    for (int i = 0; i < n && !matched; ++i)
      for (int j = 0; j < n && !matched; ++j)
        for (int l = 0; l < n && !matched; ++l) {
          if (j == l) continue;
          if (idx == canon_index(n, cell_index(n, i, j), cell_index(n, i, l)) ||
              idx == canon_index(n, cell_index(n, j, i), cell_index(n, l, i)))
            matched = true;
        }
    CHECK(matched);
  }
}
