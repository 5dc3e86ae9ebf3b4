#include "qap/linalg.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include "qap/rng.hpp"

namespace qap {

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  DenseMatrix m;
  m.rows = rows.size();
  m.cols = rows.empty() ? 0 : rows.front().size();
  m.data.reserve(m.rows * m.cols);
  for (const auto& r : rows) {
    if (r.size() != m.cols) throw std::invalid_argument("from_rows: ragged rows");
    m.data.insert(m.data.end(), r.begin(), r.end());
  }
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols, rows);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
  return t;
}

RankMode default_rank_mode(std::size_t rows) {
  return rows > 500 ? RankMode::modp : RankMode::exact;
}

// ---------------------------------------------------------------- mod p ---

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace

const std::vector<u64>& modp_prime_pool() {
  static std::vector<u64> pool;
  static std::once_flag once;
  std::call_once(once, [] {
    u64 candidate = (1ULL << 62) - 1;
    while (pool.size() < 32) {
      if (is_prime_u64(candidate)) pool.push_back(candidate);
      candidate -= 2;
    }
  });
  return pool;
}

std::vector<u64> pick_primes(int count, std::uint64_t seed) {
  const auto& pool = modp_prime_pool();
  if (count < 1 || static_cast<std::size_t>(count) > pool.size())
    throw std::invalid_argument("pick_primes: bad count");
  std::vector<u64> shuffled = pool;
  Rng rng(seed);
  rng.shuffle(shuffled);
  shuffled.resize(static_cast<std::size_t>(count));
  return shuffled;
}

ModpMatrix to_modp(const DenseMatrix& m, u64 p) {
  ModpMatrix out;
  out.p = p;
  out.rows = m.rows;
  out.cols = m.cols;
  out.a.resize(m.rows * m.cols);
  for (std::size_t k = 0; k < m.data.size(); ++k) {
    const Rational& r = m.data[k];
    u64 num = mpz_fdiv_ui(r.get_num().get_mpz_t(), p);
    u64 den = mpz_fdiv_ui(r.get_den().get_mpz_t(), p);
    if (den == 0) throw std::domain_error("to_modp: denominator divisible by prime");
    out.a[k] = den == 1 ? num : mulmod(num, invmod(den, p), p);
  }
  return out;
}

ModpRref modp_rref(ModpMatrix m) {
  const u64 p = m.p;
  std::size_t piv_row = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < m.cols && piv_row < m.rows; ++c) {
    std::size_t r = piv_row;
    while (r < m.rows && m.at(r, c) == 0) ++r;
    if (r == m.rows) continue;
    if (r != piv_row)
      for (std::size_t j = c; j < m.cols; ++j) std::swap(m.at(r, j), m.at(piv_row, j));
    u64 inv = invmod(m.at(piv_row, c), p);
    for (std::size_t j = c; j < m.cols; ++j) m.at(piv_row, j) = mulmod(m.at(piv_row, j), inv, p);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == piv_row) continue;
      u64 f = m.at(i, c);
      if (f == 0) continue;
      for (std::size_t j = c; j < m.cols; ++j) {
        u64 sub = mulmod(f, m.at(piv_row, j), p);
        m.at(i, j) = (m.at(i, j) + p - sub) % p;
      }
    }
    pivots.push_back(c);
    ++piv_row;
  }
  ModpRref out;
  out.rank = pivots.size();
  out.pivot_cols = std::move(pivots);
  out.reduced = std::move(m);
  return out;
}

std::size_t modp_rank(const DenseMatrix& m, u64 p) {
  ModpMatrix w = to_modp(m, p);
  std::size_t piv_row = 0;
  for (std::size_t c = 0; c < w.cols && piv_row < w.rows; ++c) {
    std::size_t r = piv_row;
    while (r < w.rows && w.at(r, c) == 0) ++r;
    if (r == w.rows) continue;
    if (r != piv_row)
      for (std::size_t j = c; j < w.cols; ++j) std::swap(w.at(r, j), w.at(piv_row, j));
    u64 inv = invmod(w.at(piv_row, c), p);
    for (std::size_t i = piv_row + 1; i < w.rows; ++i) {
      u64 f = w.at(i, c);
      if (f == 0) continue;
      f = mulmod(f, inv, p);
      w.at(i, c) = 0;
      for (std::size_t j = c + 1; j < w.cols; ++j) {
        u64 sub = mulmod(f, w.at(piv_row, j), p);
        w.at(i, j) = (w.at(i, j) + p - sub) % p;
      }
    }
    ++piv_row;
  }
  return piv_row;
}

// ---------------------------------------------------------------- exact ---

namespace {

// Rows scaled to integers (rank is scale-invariant), then fraction-free
// Bareiss elimination; pivot is the first nonzero in column order.
std::vector<BigInt> scale_to_integers(const DenseMatrix& m) {
  std::vector<BigInt> w(m.rows * m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    BigInt l = 1;
    for (std::size_t c = 0; c < m.cols; ++c) {
      const BigInt& den = m.at(r, c).get_den();
      if (den != 1) {
        BigInt g;
        mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
        l = l / g * den;
      }
    }
    for (std::size_t c = 0; c < m.cols; ++c) {
      const Rational& v = m.at(r, c);
      w[r * m.cols + c] = v.get_num() * (l / v.get_den());
    }
  }
  return w;
}

std::size_t bareiss_rank(const DenseMatrix& m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  std::vector<BigInt> w = scale_to_integers(m);
  const std::size_t rows = m.rows, cols = m.cols;
  auto at = [&](std::size_t r, std::size_t c) -> BigInt& { return w[r * cols + c]; };
  BigInt prev = 1;
  std::size_t piv_row = 0;
  for (std::size_t c = 0; c < cols && piv_row < rows; ++c) {
    std::size_t r = piv_row;
    while (r < rows && at(r, c) == 0) ++r;
    if (r == rows) continue;
    if (r != piv_row)
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(r, j), at(piv_row, j));
    const BigInt& piv = at(piv_row, c);
    for (std::size_t i = piv_row + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        BigInt t = piv * at(i, j) - at(i, c) * at(piv_row, j);
        mpz_divexact(at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, c) = 0;
    }
    prev = piv;
    ++piv_row;
  }
  return piv_row;
}

struct RationalRref {
  DenseMatrix m;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
};

// Gauss-Jordan over the rationals, first-nonzero pivots (deterministic).
RationalRref rational_rref(DenseMatrix m) {
  RationalRref out;
  std::size_t piv_row = 0;
  for (std::size_t c = 0; c < m.cols && piv_row < m.rows; ++c) {
    std::size_t r = piv_row;
    while (r < m.rows && m.at(r, c) == 0) ++r;
    if (r == m.rows) continue;
    if (r != piv_row)
      for (std::size_t j = 0; j < m.cols; ++j) swap(m.at(r, j), m.at(piv_row, j));
    Rational inv = 1 / m.at(piv_row, c);
    for (std::size_t j = c; j < m.cols; ++j) m.at(piv_row, j) *= inv;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == piv_row || m.at(i, c) == 0) continue;
      Rational f = m.at(i, c);
      for (std::size_t j = c; j < m.cols; ++j) m.at(i, j) -= f * m.at(piv_row, j);
    }
    out.pivot_cols.push_back(c);
    ++piv_row;
  }
  out.rank = piv_row;
  out.m = std::move(m);
  return out;
}

bool multiply_is_zero(const DenseMatrix& m, const std::vector<Rational>& v) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    Rational acc = 0;
    for (std::size_t c = 0; c < m.cols; ++c)
      if (m.at(r, c) != 0 && v[c] != 0) acc += m.at(r, c) * v[c];
    if (acc != 0) return false;
  }
  return true;
}

// Kernel vector from an RREF: free column f gets 1, pivot columns get the
// negated reduced coefficients.
std::vector<Rational> kernel_from_rref(const RationalRref& rr, std::size_t free_col) {
  std::vector<Rational> v(rr.m.cols);
  v[free_col] = 1;
  for (std::size_t k = 0; k < rr.pivot_cols.size(); ++k)
    v[rr.pivot_cols[k]] = -rr.m.at(k, free_col);
  return v;
}

std::optional<std::vector<Rational>> nullspace_small(const DenseMatrix& m) {
  RationalRref rr = rational_rref(m);
  if (rr.rank == m.cols) return std::nullopt;
  std::vector<bool> is_pivot(m.cols, false);
  for (std::size_t c : rr.pivot_cols) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  std::vector<Rational> v = kernel_from_rref(rr, free_col);
  if (!multiply_is_zero(m, v)) throw std::logic_error("nullspace_vector: verification failed");
  return v;
}

// mod-p RREF locates a free column and the support of its kernel vector;
// the exact coefficients are then recovered by a rational solve restricted
// to that support and verified against the full matrix.
std::optional<std::vector<Rational>> nullspace_large(const DenseMatrix& m) {
  for (u64 p : modp_prime_pool()) {
    ModpRref rr;
    try {
      rr = modp_rref(to_modp(m, p));
    } catch (const std::domain_error&) {
      continue;
    }
    if (rr.rank == m.cols) break;  // full column rank mod p; confirm exactly below

    std::vector<bool> is_pivot(m.cols, false);
    for (std::size_t c : rr.pivot_cols) is_pivot[c] = true;
    std::size_t free_col = 0;
    while (free_col < m.cols && is_pivot[free_col]) ++free_col;
    if (free_col == m.cols) break;

    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < rr.pivot_cols.size(); ++k)
      if (rr.reduced.at(k, free_col) != 0) support.push_back(rr.pivot_cols[k]);

    DenseMatrix sub(m.rows, support.size());
    std::vector<Rational> rhs(m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) {
      for (std::size_t k = 0; k < support.size(); ++k) sub.at(r, k) = m.at(r, support[k]);
      rhs[r] = -m.at(r, free_col);
    }
    auto x = solve(sub, rhs);
    if (!x) continue;  // unlucky prime; try the next one
    std::vector<Rational> v(m.cols);
    v[free_col] = 1;
    for (std::size_t k = 0; k < support.size(); ++k) v[support[k]] = (*x)[k];
    if (!multiply_is_zero(m, v)) continue;
    return v;
  }
  // Either genuinely full column rank or every prime failed; settle exactly.
  return nullspace_small(m);
}

}  // namespace

std::size_t rank(const DenseMatrix& m, RankMode mode, const ModpOptions& opts) {
  if (m.rows == 0 || m.cols == 0) return 0;
  if (mode == RankMode::exact) return bareiss_rank(m);
  if (opts.prime_count < 2) throw std::invalid_argument("modp rank needs >= 2 primes");
  std::size_t best = 0;
  int used = 0;
  for (u64 p : pick_primes(static_cast<int>(modp_prime_pool().size()), opts.seed)) {
    try {
      best = std::max(best, modp_rank(m, p));
      ++used;
    } catch (const std::domain_error&) {
      continue;  // prime divides a denominator
    }
    if (used == opts.prime_count) break;
  }
  if (used < opts.prime_count) throw std::runtime_error("modp rank: prime pool exhausted");
  return best;
}

long long affine_rank(const DenseMatrix& points, RankMode mode, const ModpOptions& opts) {
  if (points.rows == 0) throw std::invalid_argument("affine_rank: empty point set");
  DenseMatrix aug(points.rows, points.cols + 1);
  for (std::size_t r = 0; r < points.rows; ++r) {
    for (std::size_t c = 0; c < points.cols; ++c) aug.at(r, c) = points.at(r, c);
    aug.at(r, points.cols) = 1;
  }
  return static_cast<long long>(rank(aug, mode, opts)) - 1;
}

std::optional<std::vector<Rational>> nullspace_vector(const DenseMatrix& m) {
  if (m.rows == 0 || m.cols == 0) throw std::invalid_argument("nullspace_vector: empty matrix");
  if (m.cols <= 256 || m.rows * m.cols <= 1 << 16) return nullspace_small(m);
  return nullspace_large(m);
}

std::size_t modp_rank_streaming(
    std::size_t rows, std::size_t cols,
    const std::function<void(std::size_t, std::vector<std::uint64_t>&)>& fill_row,
    std::uint64_t p) {
  // reduced pivot rows, normalized to leading 1, indexed by pivot column
  std::vector<std::vector<u64>> pivot_rows;
  std::vector<std::size_t> pivot_cols;
  std::vector<u64> v(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    std::fill(v.begin(), v.end(), 0);
    fill_row(r, v);
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) {
      u64 f = v[pivot_cols[k]];
      if (f == 0) continue;
      const auto& pr = pivot_rows[k];
      for (std::size_t j = pivot_cols[k]; j < cols; ++j) {
        if (pr[j] == 0) continue;
        u64 sub = mulmod(f, pr[j], p);
        v[j] = (v[j] + p - sub) % p;
      }
    }
    std::size_t lead = 0;
    while (lead < cols && v[lead] == 0) ++lead;
    if (lead == cols) continue;
    u64 inv = invmod(v[lead], p);
    for (std::size_t j = lead; j < cols; ++j) v[j] = mulmod(v[j], inv, p);
    // keep pivot lists sorted by column so reduction sweeps stay one pass
    std::size_t pos = static_cast<std::size_t>(
        std::lower_bound(pivot_cols.begin(), pivot_cols.end(), lead) - pivot_cols.begin());
    pivot_cols.insert(pivot_cols.begin() + static_cast<std::ptrdiff_t>(pos), lead);
    pivot_rows.insert(pivot_rows.begin() + static_cast<std::ptrdiff_t>(pos), v);
    if (pivot_cols.size() == cols) return cols;
  }
  return pivot_cols.size();
}

std::vector<std::size_t> modp_independent_rows(
    std::size_t rows, std::size_t cols,
    const std::function<void(std::size_t, std::vector<std::uint64_t>&)>& fill_row,
    std::uint64_t p) {
  std::vector<std::vector<u64>> pivot_rows;
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> kept;
  std::vector<u64> v(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    std::fill(v.begin(), v.end(), 0);
    fill_row(r, v);
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) {
      u64 f = v[pivot_cols[k]];
      if (f == 0) continue;
      const auto& pr = pivot_rows[k];
      for (std::size_t j = pivot_cols[k]; j < cols; ++j) {
        if (pr[j] == 0) continue;
        u64 sub = mulmod(f, pr[j], p);
        v[j] = (v[j] + p - sub) % p;
      }
    }
    std::size_t lead = 0;
    while (lead < cols && v[lead] == 0) ++lead;
    if (lead == cols) continue;
    u64 inv = invmod(v[lead], p);
    for (std::size_t j = lead; j < cols; ++j) v[j] = mulmod(v[j], inv, p);
    std::size_t pos = static_cast<std::size_t>(
        std::lower_bound(pivot_cols.begin(), pivot_cols.end(), lead) - pivot_cols.begin());
    pivot_cols.insert(pivot_cols.begin() + static_cast<std::ptrdiff_t>(pos), lead);
    pivot_rows.insert(pivot_rows.begin() + static_cast<std::ptrdiff_t>(pos), v);
    kept.push_back(r);
  }
  return kept;
}

std::size_t modp_rank_streaming_multi(
    std::size_t rows, std::size_t cols,
    const std::function<void(std::size_t, std::vector<std::uint64_t>&)>& fill_row,
    const ModpOptions& opts) {
  if (opts.prime_count < 2) throw std::invalid_argument("modp rank needs >= 2 primes");
  std::size_t best = 0;
  auto primes = pick_primes(opts.prime_count, opts.seed);
  for (u64 p : primes) best = std::max(best, modp_rank_streaming(rows, cols, fill_row, p));
  return best;
}

std::optional<std::vector<Rational>> solve(const DenseMatrix& a, const std::vector<Rational>& b) {
  if (a.rows != b.size()) throw std::invalid_argument("solve: dimension mismatch");
  DenseMatrix aug(a.rows, a.cols + 1);
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t c = 0; c < a.cols; ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols) = b[r];
  }
  RationalRref rr = rational_rref(std::move(aug));
  // a pivot in the rhs column marks an inconsistent system
  if (!rr.pivot_cols.empty() && rr.pivot_cols.back() == a.cols) return std::nullopt;
  std::vector<Rational> x(a.cols);
  for (std::size_t k = 0; k < rr.pivot_cols.size(); ++k)
    x[rr.pivot_cols[k]] = rr.m.at(k, a.cols);
  return x;
}

}  // namespace qap
