#pragma once

#include <string>
#include <vector>

#include "qap/perm.hpp"

namespace qap {

/// Data for the signed 12-permutation cancellation identity: a base
/// permutation, three positions whose images get rearranged all six ways,
/// and two further positions swapped to produce the primed six.
struct SigmaConfig {
  int n = 0;
  Permutation base;
  int k1 = 0, k2 = 0, k3 = 0;
  int x = 0, y = 0;
};

void validate(const SigmaConfig& cfg);  // throws std::invalid_argument

/// The twelve (sign, permutation) pairs in fixed order: the six image
/// arrangements of the base, then their (x,y)-transposed partners.
std::vector<std::pair<int, Permutation>> build_sigma_set(const SigmaConfig& cfg);

struct ZeroIdentityResult {
  bool zero = false;
  std::vector<int> residual;  // n^2 x n^2, row-major, exact integer sum
};

/// Sum of sign(sigma) * vertex(sigma) over the twelve permutations; the
/// identity asserts it vanishes entrywise.
ZeroIdentityResult verify_zero_identity(const SigmaConfig& cfg);

/// Membership constraints for one family of permutations: forced images
/// plus per-position forbidden image sets.
struct ConstraintGroup {
  std::vector<std::pair<int, int>> fixed;               // (position, image)
  std::vector<std::pair<int, std::vector<int>>> forbidden;  // (position, images)
};

/// lemma1: set-valued forbids, side condition |union of forbid sets| <=
/// n - a - b (vacuous forbids dropped first), value relabeling applied so
/// the forbidden values sit past the first a+b values.
/// lemma2: singleton forbids, pairwise distinct, disjoint from the forced
/// images, and a + b < n.
/// plain: no side conditions; used for unions and negative controls.
enum class GraphMode { lemma1, lemma2, plain };

struct TranspositionGraphSpec {
  int n = 0;
  GraphMode mode = GraphMode::plain;
  std::vector<ConstraintGroup> groups;  // a permutation qualifies if any group accepts it
};

struct PermGraph {
  int n = 0;
  std::vector<Permutation> nodes;       // sorted lexicographically
  std::vector<std::vector<int>> adj;
  long long edge_count = 0;
  std::vector<int> value_relabel;       // identity unless lemma1 relabeling applied
};

/// Nodes are the qualifying permutations, edges join pairs that differ by
/// exactly one transposition.  Guarded to n <= 8.
PermGraph build_transposition_graph(const TranspositionGraphSpec& spec);

struct Connectivity {
  bool connected = false;
  int components = 0;  // empty graph: vacuously connected with 0 components
};

Connectivity is_connected(const PermGraph& g);

/// BFS distances from a start node; -1 for unreachable.
std::vector<int> bfs_distances(const PermGraph& g, int start);

/// Index of a permutation among the nodes, or -1.
int find_node(const PermGraph& g, const Permutation& p);

}  // namespace qap
