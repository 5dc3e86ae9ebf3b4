#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qap/rational.hpp"

namespace qap {

struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;  // row-major

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  Rational& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  static DenseMatrix from_rows(const std::vector<std::vector<Rational>>& rows);
  DenseMatrix transposed() const;
};

enum class RankMode { exact, modp };

/// modp is Monte Carlo: the reported rank is max over prime_count distinct
/// ~62-bit primes and is <= the true rank; it equals the true rank unless
/// every chosen prime divides the same nonzero minor, probability < 2^-40
/// for random choices from the pool.
struct ModpOptions {
  int prime_count = 2;
  std::uint64_t seed = 0;  // selects primes from the pool
};

/// Exact mode over 500 rows gets expensive; callers without an explicit
/// request follow this default.
RankMode default_rank_mode(std::size_t rows);

std::size_t rank(const DenseMatrix& m, RankMode mode, const ModpOptions& opts = {});

/// Affine dimension of the row set: rank of rows augmented with a trailing
/// 1 column, minus 1.  Works whether or not the affine hull passes through
/// the origin.
long long affine_rank(const DenseMatrix& points, RankMode mode, const ModpOptions& opts = {});

/// Some nonzero v with M v = 0, exact, verified by multiplication before
/// returning; nullopt iff M has full column rank.
std::optional<std::vector<Rational>> nullspace_vector(const DenseMatrix& m);

/// A particular solution of A x = b (free variables at 0); nullopt when
/// inconsistent.
std::optional<std::vector<Rational>> solve(const DenseMatrix& a, const std::vector<Rational>& b);

// --- mod-p engine, reused by the bigger pipelines ---

const std::vector<std::uint64_t>& modp_prime_pool();
std::vector<std::uint64_t> pick_primes(int count, std::uint64_t seed);

struct ModpMatrix {
  std::uint64_t p = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> a;  // row-major, reduced mod p

  std::uint64_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  std::uint64_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

/// Throws std::domain_error if a denominator vanishes mod p (caller picks
/// another prime).
ModpMatrix to_modp(const DenseMatrix& m, std::uint64_t p);

struct ModpRref {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
  ModpMatrix reduced;  // rows 0..rank-1 are the reduced pivot rows
};

ModpRref modp_rref(ModpMatrix m);

std::size_t modp_rank(const DenseMatrix& m, std::uint64_t p);

/// Streaming mod-p rank: rows are produced on demand (fill_row writes row r
/// into a zeroed scratch buffer of length cols, entries already reduced mod
/// p).  Keeps only the reduced pivot rows, so n! x m sweeps never hold the
/// whole matrix.
std::size_t modp_rank_streaming(
    std::size_t rows, std::size_t cols,
    const std::function<void(std::size_t, std::vector<std::uint64_t>&)>& fill_row,
    std::uint64_t p);

/// Max of modp_rank_streaming over opts.prime_count primes.
std::size_t modp_rank_streaming_multi(
    std::size_t rows, std::size_t cols,
    const std::function<void(std::size_t, std::vector<std::uint64_t>&)>& fill_row,
    const ModpOptions& opts = {});

/// Indices of a maximal independent subset of the rows, scanning in order
/// (kept rows span all later ones mod p).
std::vector<std::size_t> modp_independent_rows(
    std::size_t rows, std::size_t cols,
    const std::function<void(std::size_t, std::vector<std::uint64_t>&)>& fill_row,
    std::uint64_t p);

}  // namespace qap
