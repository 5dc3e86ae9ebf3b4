#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qap/linalg.hpp"
#include "qap/perm.hpp"

namespace qap {

/// Ordered basis of the degree-1 and degree-2 monomials over the n^2 cell
/// variables plus the homogenizing variable z: first the single variables,
/// then products v_a v_b with a <= b, lexicographic.
struct MonomialBasis {
  int n = 0;
  int var_count = 0;   // n^2 + 1, z last
  long long size = 0;  // var_count + var_count (var_count + 1) / 2

  long long deg1_index(int v) const;
  long long deg2_index(int a, int b) const;
  std::string monomial_name(long long idx) const;  // for reports, 1-based cells
};

MonomialBasis make_basis(int n);

/// Sparse coefficients of y_sigma^2 - y_sigma where y_sigma = sum_i
/// x_{i,sigma(i)} + z.
std::vector<std::pair<long long, Rational>> moment_vector(const Permutation& sigma,
                                                          const MonomialBasis& basis);

/// Same but for y_sigma^2 alone (no degree-1 correction).
std::vector<std::pair<long long, Rational>> square_vector(const Permutation& sigma,
                                                          const MonomialBasis& basis);

/// Rows = moment vectors of all n! permutations.
DenseMatrix moment_matrix(int n, const MonomialBasis& basis);

/// 1 + (n^2 + 1) + (n^4 + n^2)/2.
long long span_dimension_bound(int n);

struct DependenceCertificate {
  int n = 0;
  std::vector<Permutation> support;
  std::vector<Rational> alpha;  // scaled to coprime integers
  bool residual_checked = false;
  bool mixed_signs = false;
  long long points_checked = 0;
};

/// A verified exact linear dependence among the moment vectors: located by
/// a mod-p kernel, made exact by a restricted rational solve, then checked
/// symbolically and at seeded random integer points.  Guarded to n = 6
/// unless allow_large (n = 7) is set.
DependenceCertificate dependence_certificate(int n, std::uint64_t seed = 0, int points = 1000,
                                             bool allow_large = false);

struct SssReport {
  long long rank_moment = 0;   // rank of the y^2 - y rows
  long long rank_square = 0;   // rank of the y^2 rows
  long long rank_joint = 0;    // rank of both stacked column-wise
  bool equal = false;          // dependence spaces coincide
  bool spot_checked = false;   // exact kernel vectors annihilate the other side
};

/// Dependence-space equality between the y^2 - y rows and the y^2 rows.
/// Rank arguments are exact for n <= 4 and Monte Carlo (mod-p) above; the
/// spot check is always exact.
SssReport check_sss_equivalence(int n, const ModpOptions& opts = {});

}  // namespace qap
