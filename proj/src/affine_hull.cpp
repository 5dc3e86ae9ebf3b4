#include "qap/affine_hull.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qap {

namespace {

std::string cell_label(int n, int p) {
  auto [i, j] = cell_of(n, p);
  return std::to_string(i + 1) + std::to_string(j + 1);
}

std::string coord_label(int n, int p, int q) {
  return "Y[" + cell_label(n, p) + "," + cell_label(n, q) + "]";
}

// Accumulates coefficients on coordinates, folding (p,q) onto p <= q in
// canonical mode, then emits the cleaned equation.
class EquationBuilder {
 public:
  explicit EquationBuilder(CoordMode mode) : mode_(mode) {}

  void add(int p, int q, const Rational& c) {
    if (mode_ == CoordMode::canonical && p > q) std::swap(p, q);
    coeffs_[{p, q}] += c;
  }

  Equation finish(EqTag tag, Rational rhs, std::string label) {
    Equation eq;
    eq.tag = tag;
    eq.rhs = std::move(rhs);
    eq.label = std::move(label);
    for (auto& [pq, c] : coeffs_) {
      if (c == 0) continue;
      eq.terms.push_back(EqTerm{pq.first, pq.second, c});
    }
    coeffs_.clear();
    return eq;
  }

 private:
  CoordMode mode_;
  std::map<std::pair<int, int>, Rational> coeffs_;
};

}  // namespace

long long ConstraintSystem::coord_index(int p, int q) const {
  if (mode == CoordMode::canonical) return canon_index(n, p, q);
  return static_cast<long long>(p) * n * n + q;
}

ConstraintSystem build_equation_system(int n, CoordMode mode) {
  if (n < 2) throw std::invalid_argument("build_equation_system: n must be >= 2");
  ConstraintSystem sys;
  sys.n = n;
  sys.mode = mode;
  long long N = static_cast<long long>(n) * n;
  sys.coord_count = mode == CoordMode::canonical ? canon_count(n) : N * N;

  EquationBuilder eb(mode);

  if (mode == CoordMode::full) {
    // symmetry, explicit only in the full coordinate space
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) {
        eb.add(p, q, 1);
        eb.add(q, p, -1);
        sys.equations.push_back(eb.finish(
            EqTag::symmetry, 0, "symmetry[" + coord_label(n, p, q) + "]"));
      }
  }

  // zero blocks: two cells sharing a row, and two cells sharing a column
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        if (j == l) continue;
        eb.add(cell_index(n, i, j), cell_index(n, i, l), 1);
        sys.equations.push_back(eb.finish(
            EqTag::zero_block, 0,
            "zero-block-row[" + coord_label(n, cell_index(n, i, j), cell_index(n, i, l)) + "]"));
        eb.add(cell_index(n, j, i), cell_index(n, l, i), 1);
        sys.equations.push_back(eb.finish(
            EqTag::zero_block, 0,
            "zero-block-col[" + coord_label(n, cell_index(n, j, i), cell_index(n, l, i)) + "]"));
      }

  // block sums: summing the row index (resp. column index) of the partner
  // cell reproduces the diagonal entry
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        int p = cell_index(n, i, j);
        for (int k = 0; k < n; ++k) eb.add(p, cell_index(n, k, l), 1);
        eb.add(p, p, -1);
        sys.equations.push_back(eb.finish(
            EqTag::row_sum, 0,
            "row-sum[i=" + std::to_string(i + 1) + ",j=" + std::to_string(j + 1) +
                ",l=" + std::to_string(l + 1) + ",partner-rows]"));
        for (int k = 0; k < n; ++k) eb.add(p, cell_index(n, l, k), 1);
        eb.add(p, p, -1);
        sys.equations.push_back(eb.finish(
            EqTag::row_sum, 0,
            "row-sum[i=" + std::to_string(i + 1) + ",j=" + std::to_string(j + 1) +
                ",l=" + std::to_string(l + 1) + ",partner-cols]"));
      }

  // diagonal sums: each row and each column of the diagonal carries total 1
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int p = cell_index(n, i, j);
      eb.add(p, p, 1);
    }
    sys.equations.push_back(
        eb.finish(EqTag::diag_sum, 1, "diag-sum-row[i=" + std::to_string(i + 1) + "]"));
    for (int j = 0; j < n; ++j) {
      int p = cell_index(n, j, i);
      eb.add(p, p, 1);
    }
    sys.equations.push_back(
        eb.finish(EqTag::diag_sum, 1, "diag-sum-col[i=" + std::to_string(i + 1) + "]"));
  }

  return sys;
}

Rational evaluate_equation(const Equation& eq, const SecondOrderVertex& v) {
  Rational acc = 0;
  for (const auto& t : eq.terms)
    if (v.has(t.p, t.q)) acc += t.coeff;
  return acc;
}

bool satisfies(const ConstraintSystem& sys, const SecondOrderVertex& v,
               std::string* first_violation) {
  for (const auto& eq : sys.equations) {
    if (evaluate_equation(eq, v) != eq.rhs) {
      if (first_violation) *first_violation = eq.label;
      return false;
    }
  }
  return true;
}

DenseMatrix system_matrix(const ConstraintSystem& sys) {
  DenseMatrix m(sys.equations.size(), static_cast<std::size_t>(sys.coord_count));
  for (std::size_t r = 0; r < sys.equations.size(); ++r)
    for (const auto& t : sys.equations[r].terms)
      m.at(r, static_cast<std::size_t>(sys.coord_index(t.p, t.q))) = t.coeff;
  return m;
}

std::vector<Rational> system_rhs(const ConstraintSystem& sys) {
  std::vector<Rational> rhs;
  rhs.reserve(sys.equations.size());
  for (const auto& eq : sys.equations) rhs.push_back(eq.rhs);
  return rhs;
}

std::vector<long long> pinned_coordinates(int n) {
  std::vector<long long> pinned;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = j + 1; l < n; ++l) {
        pinned.push_back(canon_index(n, cell_index(n, i, j), cell_index(n, i, l)));
        pinned.push_back(canon_index(n, cell_index(n, j, i), cell_index(n, l, i)));
      }
  std::sort(pinned.begin(), pinned.end());
  pinned.erase(std::unique(pinned.begin(), pinned.end()), pinned.end());
  return pinned;
}

long long dimension_formula(int n) {
  if (n < 4) throw std::invalid_argument("dimension_formula: defined for n >= 4");
  long long quartic = static_cast<long long>(n) * (n - 1) * (n - 2) * (n - 3) / 2;
  return quartic + static_cast<long long>(n - 1) * (n - 1) + 1;
}

long long affine_dimension(int n, RankMode mode, const ModpOptions& opts) {
  if (n < 2 || n > 7) throw std::invalid_argument("affine_dimension: guarded to 2 <= n <= 7");
  if (mode == RankMode::exact && n > 6)
    throw std::invalid_argument("affine_dimension: exact mode guarded to n <= 6");
  long long cols = canon_count(n) + 1;  // trailing 1 for the affine augmentation
  auto perms = enumerate_permutations(n);
  if (mode == RankMode::modp) {
    auto fill = [&](std::size_t r, std::vector<std::uint64_t>& row) {
      for (auto [p, q] : vertex(perms[r]).pairs)
        row[static_cast<std::size_t>(canon_index(n, p, q))] = 1;
      row[static_cast<std::size_t>(cols - 1)] = 1;
    };
    return static_cast<long long>(modp_rank_streaming_multi(
               perms.size(), static_cast<std::size_t>(cols), fill, opts)) -
           1;
  }
  DenseMatrix m(perms.size(), static_cast<std::size_t>(canon_count(n)));
  for (std::size_t r = 0; r < perms.size(); ++r)
    for (auto [p, q] : vertex(perms[r]).pairs)
      m.at(r, static_cast<std::size_t>(canon_index(n, p, q))) = 1;
  return affine_rank(m, RankMode::exact);
}

Permutation decode_01(const std::vector<int>& full, int n) {
  std::size_t side = static_cast<std::size_t>(n) * n;
  if (full.size() != side * side) throw DecodeError("decode_01: matrix size is not n^2 x n^2");
  auto at = [&](std::size_t p, std::size_t q) { return full[p * side + q]; };

  for (std::size_t p = 0; p < side; ++p)
    for (std::size_t q = 0; q < side; ++q) {
      if (at(p, q) != 0 && at(p, q) != 1)
        throw DecodeError("decode_01: entry " +
                          coord_label(n, static_cast<int>(p), static_cast<int>(q)) +
                          " is not 0/1");
      if (at(p, q) != at(q, p))
        throw DecodeError("decode_01: symmetry violated at " +
                          coord_label(n, static_cast<int>(p), static_cast<int>(q)));
    }

  // the diagonal must vectorize a permutation matrix
  std::vector<int> image(static_cast<std::size_t>(n), -1);
  std::vector<int> col_hits(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    int ones = 0;
    for (int j = 0; j < n; ++j) {
      std::size_t p = static_cast<std::size_t>(cell_index(n, i, j));
      if (at(p, p) == 1) {
        ++ones;
        image[static_cast<std::size_t>(i)] = j;
        ++col_hits[static_cast<std::size_t>(j)];
      }
    }
    if (ones != 1)
      throw DecodeError("decode_01: diagonal block row " + std::to_string(i + 1) + " carries " +
                        std::to_string(ones) + " ones; diag-sum forces exactly 1");
  }
  for (int j = 0; j < n; ++j)
    if (col_hits[static_cast<std::size_t>(j)] != 1)
      throw DecodeError("decode_01: diagonal block column " + std::to_string(j + 1) + " carries " +
                        std::to_string(col_hits[static_cast<std::size_t>(j)]) +
                        " ones; diag-sum forces exactly 1");

  Permutation sigma(image);
  std::vector<int> expected = vertex(sigma).full_matrix();
  for (std::size_t p = 0; p < side; ++p)
    for (std::size_t q = 0; q < side; ++q)
      if (at(p, q) != expected[p * side + q])
        throw DecodeError("decode_01: entry " +
                          coord_label(n, static_cast<int>(p), static_cast<int>(q)) + " is " +
                          std::to_string(at(p, q)) + " but the decoded permutation " +
                          sigma.to_string() + " forces " +
                          std::to_string(expected[p * side + q]));
  return sigma;
}

}  // namespace qap
