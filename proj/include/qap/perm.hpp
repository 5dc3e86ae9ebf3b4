#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qap/rational.hpp"

namespace qap {

/// A permutation of {0..n-1}; image[i] = sigma(i).  Indices are 0-based
/// internally and 1-based in every human-facing rendering.
struct Permutation {
  std::vector<int> image;

  Permutation() = default;
  explicit Permutation(std::vector<int> img) : image(std::move(img)) {}

  static Permutation identity(int n);

  int n() const { return static_cast<int>(image.size()); }
  int operator()(int i) const { return image[static_cast<std::size_t>(i)]; }
  bool is_valid() const;

  std::string to_string() const;  // 1-based, e.g. "(2,1,3)"

  auto operator<=>(const Permutation&) const = default;
};

long long factorial(int n);

/// Row-major linearization of a cell (i,j) of an n x n matrix.
inline int cell_index(int n, int i, int j) { return i * n + j; }
inline std::pair<int, int> cell_of(int n, int flat) { return {flat / n, flat % n}; }

struct PairIndex {
  int i = 0;
  int j = 0;
  int flat = 0;
};

PairIndex pair_index(int n, int i, int j);

/// Number of canonical coordinates (p,q), p <= q, p,q < n^2.
long long canon_count(int n);

/// Linear index of the canonical coordinate (p,q), p <= q (upper triangle,
/// row-major).
long long canon_index(int n, int p, int q);

/// A second-order permutation matrix stored as the set of canonical
/// coordinate pairs that carry a 1.  The implied full matrix is symmetric;
/// absent coordinates are 0.
struct SecondOrderVertex {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;  // sorted, p <= q

  bool has(int p, int q) const;  // order-insensitive lookup

  /// Dense 0/1 row over the canonical coordinate space.
  std::vector<Rational> canonical_row() const;

  /// Dense n^2 x n^2 full matrix, row-major.
  std::vector<int> full_matrix() const;
};

SecondOrderVertex vertex(const Permutation& sigma);

/// sigma with the images at positions x and y swapped.
Permutation apply_transposition(const Permutation& sigma, int x, int y);

/// +1 for even permutations, -1 for odd.
int parity(const Permutation& sigma);

/// All n! permutations in lexicographic order of image sequences.
/// Guarded at n <= 10 unless allow_large is set.
std::vector<Permutation> enumerate_permutations(int n, bool allow_large = false);

/// Streaming flavor; avoids materializing n! objects when the caller only
/// folds over them.
void for_each_permutation(int n, const std::function<void(const Permutation&)>& fn,
                          bool allow_large = false);

}  // namespace qap
