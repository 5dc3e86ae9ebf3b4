#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qap/linalg.hpp"
#include "qap/perm.hpp"
#include "qap/rational.hpp"

namespace qap {

/// The quadratic master inequality in coefficient form: integer weights
/// n_ij on the cells plus an integer offset beta.  Every instance is valid
/// on all second-order permutation matrices.
struct GenericInequality {
  int n = 0;
  std::map<std::pair<int, int>, long long> coeffs;  // (i,j) -> n_ij, zero entries absent
  long long beta = 0;
};

/// Expanded linear form over the canonical coordinates, sense fixed ">= 0".
struct LinearInequality {
  int n = 0;
  std::map<std::pair<int, int>, Rational> diag;  // (i,j) cell -> coefficient of Y[ij,ij]
  std::map<std::pair<int, int>, Rational> off;   // flat (p,q), p < q -> coefficient
  Rational constant;
};

/// diag(i,j) = n_ij^2 - (2 beta - 1) n_ij; off(p,q) = 2 n_p n_q for p < q
/// (the ordered double sum folded onto canonical storage); constant =
/// beta^2 - beta.
LinearInequality expand_generic(const GenericInequality& g);

/// (s - beta)(s - beta + 1) with s = sum of n_{i,sigma(i)}; agrees with the
/// expanded form on every vertex.
Rational evaluate_at_vertex(const GenericInequality& g, const Permutation& sigma);

Rational evaluate_linear_at_vertex(const LinearInequality& ineq, const Permutation& sigma);

struct FamilyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

GenericInequality make_nonneg(int n, int i, int j, int k, int l);
GenericInequality make_triple(int n, int p1, int q1, int p2, int q2, int k, int l);

struct MtermInstance {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;  // (i_r, j_r), rows sorted ascending
  int k = 0;
  int l = 0;
};

MtermInstance make_mterm_instance(int n, std::vector<std::pair<int, int>> pairs, int k, int l);
GenericInequality make_mterm(int n, const std::vector<std::pair<int, int>>& pairs, int k, int l);
GenericInequality to_generic(const MtermInstance& inst);

GenericInequality make_box(int n, const std::vector<int>& p1, const std::vector<int>& p2,
                           const std::vector<int>& q1, const std::vector<int>& q2,
                           long long beta);

enum class Family { nonneg, triple, mterm, box_samples };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct FamilyOptions {
  int m = 3;                 // mterm only
  int samples = 20;          // box_samples only
  std::uint64_t seed = 0;    // box_samples only
};

/// Distinct instances, deduplicated under coefficient-map equality, in a
/// deterministic order; count matches instances.size().
struct FamilyEnumeration {
  std::vector<GenericInequality> instances;
  long long count = 0;
};

FamilyEnumeration enumerate_family(Family f, int n, const FamilyOptions& opts = {});
long long family_count(Family f, int n, const FamilyOptions& opts = {});

/// The closed-form count of the m-cell family (m = 1 reproduces the
/// pair-support term): prod_{t=0..m} (n-t)^2 / m!.
long long family_formula_term(int m, int n);

enum class Verdict { invalid, valid_not_supporting, face, facet };

std::string verdict_name(Verdict v);

struct FacetCertificate {
  int n = 0;
  bool valid = false;
  long long tight_count = 0;
  long long tight_affine_dim = -1;  // -1 when the tight set is empty
  long long polytope_dim = 0;
  Verdict verdict = Verdict::invalid;
  bool degenerate = false;  // all vertices tight (hyperplane contains the polytope)
  RankMode mode = RankMode::exact;
};

/// Evaluates the inequality on all n! vertices and ranks the tight set.
/// Facet verdicts are claims at this specific n only.
FacetCertificate certify(const LinearInequality& ineq, int n, RankMode mode,
                         const ModpOptions& opts = {});

/// Vertex classes of an m-cell instance: S (tight), T1 (k->l, no cell
/// matched), T2 (k->l, >= 3 matches), T3 (k not-> l, >= 2 matches).
struct VertexClass {
  enum Kind { S, T1, T2, T3 } kind = S;
  int matches = 0;
};

VertexClass classify_vertex(const MtermInstance& inst, const Permutation& sigma);

}  // namespace qap
