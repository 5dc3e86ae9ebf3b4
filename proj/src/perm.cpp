#include "qap/perm.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qap {

Permutation Permutation::identity(int n) {
  Permutation p;
  p.image.resize(static_cast<std::size_t>(n));
  std::iota(p.image.begin(), p.image.end(), 0);
  return p;
}

bool Permutation::is_valid() const {
  int size = n();
  std::vector<bool> seen(static_cast<std::size_t>(size), false);
  for (int v : image) {
    if (v < 0 || v >= size || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return size > 0;
}

std::string Permutation::to_string() const {
  std::string s = "(";
  for (int i = 0; i < n(); ++i) {
    if (i) s += ",";
    s += std::to_string(image[static_cast<std::size_t>(i)] + 1);
  }
  s += ")";
  return s;
}

long long factorial(int n) {
  long long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

PairIndex pair_index(int n, int i, int j) {
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw std::invalid_argument("pair_index: cell out of range");
  return PairIndex{i, j, cell_index(n, i, j)};
}

long long canon_count(int n) {
  long long N = static_cast<long long>(n) * n;
  return N * (N + 1) / 2;
}

long long canon_index(int n, int p, int q) {
  long long N = static_cast<long long>(n) * n;
  if (p > q) std::swap(p, q);
  // offset of row p in the packed upper triangle
  long long off = static_cast<long long>(p) * N - static_cast<long long>(p) * (p - 1) / 2;
  return off + (q - p);
}

bool SecondOrderVertex::has(int p, int q) const {
  if (p > q) std::swap(p, q);
  return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(p, q));
}

std::vector<Rational> SecondOrderVertex::canonical_row() const {
  std::vector<Rational> row(static_cast<std::size_t>(canon_count(n)));
  for (auto [p, q] : pairs) row[static_cast<std::size_t>(canon_index(n, p, q))] = 1;
  return row;
}

std::vector<int> SecondOrderVertex::full_matrix() const {
  std::size_t side = static_cast<std::size_t>(n) * n;
  std::vector<int> m(side * side, 0);
  for (auto [p, q] : pairs) {
    m[static_cast<std::size_t>(p) * side + q] = 1;
    m[static_cast<std::size_t>(q) * side + p] = 1;
  }
  return m;
}

SecondOrderVertex vertex(const Permutation& sigma) {
  if (!sigma.is_valid()) throw std::invalid_argument("vertex: invalid permutation");
  int n = sigma.n();
  SecondOrderVertex v;
  v.n = n;
  v.pairs.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  std::vector<int> cells(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cells[static_cast<std::size_t>(i)] = cell_index(n, i, sigma(i));
  // cells is strictly increasing in i, so this emits sorted canonical pairs
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k)
      v.pairs.emplace_back(cells[static_cast<std::size_t>(i)], cells[static_cast<std::size_t>(k)]);
  return v;
}

Permutation apply_transposition(const Permutation& sigma, int x, int y) {
  if (x == y) throw std::invalid_argument("apply_transposition: x == y");
  if (x < 0 || y < 0 || x >= sigma.n() || y >= sigma.n())
    throw std::invalid_argument("apply_transposition: index out of range");
  Permutation out = sigma;
  std::swap(out.image[static_cast<std::size_t>(x)], out.image[static_cast<std::size_t>(y)]);
  return out;
}

int parity(const Permutation& sigma) {
  int inversions = 0;
  int n = sigma.n();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (sigma(i) > sigma(j)) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

std::vector<Permutation> enumerate_permutations(int n, bool allow_large) {
  std::vector<Permutation> out;
  out.reserve(static_cast<std::size_t>(n <= 10 ? factorial(n) : 0));
  for_each_permutation(n, [&out](const Permutation& p) { out.push_back(p); }, allow_large);
  return out;
}

void for_each_permutation(int n, const std::function<void(const Permutation&)>& fn,
                          bool allow_large) {
  if (n < 1 || (n > 10 && !allow_large))
    throw std::invalid_argument("permutation enumeration guarded to 1 <= n <= 10");
  Permutation p = Permutation::identity(n);
  do {
    fn(p);
  } while (std::next_permutation(p.image.begin(), p.image.end()));
}

}  // namespace qap
