#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qap/linalg.hpp"
#include "qap/perm.hpp"
#include "qap/rational.hpp"

namespace qap {

/// Which coordinate space the equation system lives in.  Canonical storage
/// makes the symmetry equations structural; the full mode keeps all n^4
/// ordered coordinates and emits them explicitly, as a cross-check.
enum class CoordMode { canonical, full };

enum class EqTag { symmetry, zero_block, row_sum, diag_sum };

struct EqTerm {
  int p = 0;  // flat cell indices of the coordinate Y_{p,q}
  int q = 0;  // canonical mode keeps p <= q; full mode keeps the written order
  Rational coeff;
};

struct Equation {
  EqTag tag = EqTag::zero_block;
  std::vector<EqTerm> terms;  // zero coefficients dropped, sorted by (p,q)
  Rational rhs;
  std::string label;  // human-readable instance id, 1-based indices
};

struct ConstraintSystem {
  int n = 0;
  CoordMode mode = CoordMode::canonical;
  std::vector<Equation> equations;
  long long coord_count = 0;

  long long coord_index(int p, int q) const;
};

ConstraintSystem build_equation_system(int n, CoordMode mode = CoordMode::canonical);

/// Exact evaluation on a vertex; every equation must hold with no slack.
Rational evaluate_equation(const Equation& eq, const SecondOrderVertex& v);
bool satisfies(const ConstraintSystem& sys, const SecondOrderVertex& v,
               std::string* first_violation = nullptr);

/// Coefficient matrix / right-hand side over the system's coordinate space.
DenseMatrix system_matrix(const ConstraintSystem& sys);
std::vector<Rational> system_rhs(const ConstraintSystem& sys);

/// Canonical coordinates pinned to zero by the zero-block equations.
std::vector<long long> pinned_coordinates(int n);

/// n(n-1)(n-2)(n-3)/2 + (n-1)^2 + 1; defined for n >= 4.
long long dimension_formula(int n);

/// Affine dimension of the full vertex set, computed as a rank (guarded to
/// n <= 7; exact additionally to n <= 6).
long long affine_dimension(int n, RankMode mode, const ModpOptions& opts = {});

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reconstructs the permutation whose second-order matrix equals the given
/// full 0/1 symmetric matrix of side n^2; throws DecodeError naming the
/// first violated constraint or entry otherwise.
Permutation decode_01(const std::vector<int>& full, int n);

}  // namespace qap
