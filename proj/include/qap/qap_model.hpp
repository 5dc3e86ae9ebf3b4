#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qap/facets.hpp"
#include "qap/perm.hpp"
#include "qap/rational.hpp"
#include "qap/simplex.hpp"

namespace qap {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Assignment instance: flow matrix, distance matrix and an optional
/// linear term on the diagonal coordinates.
struct QapInstance {
  int n = 0;
  std::vector<Rational> flows;      // n x n row-major
  std::vector<Rational> distances;  // n x n row-major
  std::map<std::pair<int, int>, Rational> linear;  // (i,j) -> cost of assigning i to j

  const Rational& flow(int i, int k) const { return flows[static_cast<std::size_t>(i) * n + k]; }
  const Rational& dist(int j, int l) const {
    return distances[static_cast<std::size_t>(j) * n + l];
  }
};

/// Plain-text format: n, then the flow matrix, then the distance matrix,
/// whitespace separated.
QapInstance parse_qaplib(const std::string& text);
std::string serialize_qaplib(const QapInstance& inst);

Rational permutation_cost(const QapInstance& inst, const Permutation& sigma);

/// Exact minimum over all n! permutations, lexicographically first argmin on
/// ties.  Guarded to n <= 10.
std::pair<Rational, Permutation> brute_force_optimum(const QapInstance& inst);

/// Relaxation over the affine-hull equations with the zero-pinned canonical
/// coordinates eliminated; nonnegativity is a variable bound.
struct LpModel {
  int n = 0;
  std::vector<std::pair<int, int>> vars;  // live canonical coordinates (p,q)
  std::map<std::pair<int, int>, int> var_index;
  std::vector<std::vector<std::pair<int, Rational>>> eq_rows;  // sparse over vars
  std::vector<Rational> eq_rhs;
  std::vector<LinearInequality> cuts;

  int lookup(int p, int q) const;  // -1 for pinned/absent coordinates
};

LpModel build_lp(int n, const std::vector<LinearInequality>& cuts);

/// Objective coefficients per live variable, folding the symmetric ordered
/// sum onto canonical storage.
std::vector<Rational> objective_vector(const QapInstance& inst, const LpModel& model);

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  double value = 0;
  std::vector<double> x;  // per live variable
};

LpSolution solve_lp(const LpModel& model, const std::vector<Rational>& objective);

struct ExactLpSolution {
  LpStatus status = LpStatus::optimal;
  Rational value;
  std::vector<Rational> x;
};

/// Rational simplex; guarded to n <= 4 model sizes.
ExactLpSolution solve_lp_exact(const LpModel& model, const std::vector<Rational>& objective);

struct SeparationConfig {
  bool nonneg = true;
  bool triple = true;
  bool mterm = true;
  double tol = 1e-7;
  int budget = 50;
};

struct FoundCut {
  LinearInequality cut;
  double violation = 0;  // in the family's natural normalization
  std::string key;       // dedup key over the coefficient maps
};

/// Heuristic separation: nonneg by exact coordinate scan, the 3-cell family
/// by exhaustive scan (cheap at these sizes), the m-cell family by greedy
/// growth per anchor cell.  Incomplete for the exponential families.
std::vector<FoundCut> separate(const LpModel& model, const std::vector<double>& point,
                               const SeparationConfig& config);

struct BoundRound {
  double bound = 0;
  int cuts_added = 0;
  double max_violation = 0;
};

struct BoundConfig {
  SeparationConfig sep;
  int max_rounds = 20;
  bool brute_force = false;
};

struct BoundReport {
  std::string instance_id;
  std::vector<BoundRound> rounds;
  double final_bound = 0;
  std::optional<Rational> optimum;
  std::optional<Permutation> argmin;
  std::optional<double> gap;
  long long cut_pool_size = 0;
};

/// Iterates solve / separate / add-cuts until no violation or the round
/// budget runs out.  With brute force enabled the final bound is checked
/// against the optimum (1e-6 slack).
BoundReport cutting_plane_bound(const QapInstance& inst, const BoundConfig& config,
                                const std::string& instance_id = "");

}  // namespace qap
