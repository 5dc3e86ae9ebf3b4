#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qap/rational.hpp"

namespace qap {

enum class LpStatus { optimal, infeasible, unbounded };

inline std::string lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

/// min c.x subject to A x = b, x >= 0.
template <class S>
struct StandardLp {
  std::size_t m = 0, n = 0;
  std::vector<S> a;  // m x n row-major
  std::vector<S> b;  // length m
  std::vector<S> c;  // length n
};

template <class S>
struct LpResult {
  LpStatus status = LpStatus::optimal;
  S objective{};
  std::vector<S> x;
};

struct SimplexOptions {
  // a feasible starting basis (m column indices); empty means a cold start
  // through the artificial two-phase method
  std::vector<std::size_t> start_basis;
  long refactor_every = 400;  // float hygiene; exact arithmetic never drifts
};

namespace simplex_detail {

template <class S>
struct Traits;

template <>
struct Traits<double> {
  static constexpr bool exact = false;
  static double cost_tol() { return 1e-9; }
  static double pivot_tol() { return 1e-8; }
  static double feas_tol() { return 1e-9; }
  static double tie_tol() { return 1e-9; }
};

template <>
struct Traits<Rational> {
  static constexpr bool exact = true;
  static Rational cost_tol() { return 0; }
  static Rational pivot_tol() { return 0; }
  static Rational feas_tol() { return 0; }
  static Rational tie_tol() { return 0; }
};

template <class S>
S abs_value(const S& v) {
  return v < 0 ? S{-v} : v;
}

}  // namespace simplex_detail

/// Dense tableau simplex, columns laid out [structurals | identity | rhs].
/// The identity block provides the artificial variables of the cold start
/// and keeps the basis inverse on hand for refactorization.  A feasible
/// start basis skips phase 1.  Dantzig pricing; the leaving row follows
/// the lexicographic rule, which makes every pivot a strict lex decrease
/// (exact instantiation: guaranteed finite; floating one: no observed
/// stalls, plus periodic refactorization from original data to shed
/// rounding error).  Artificials never re-enter.
template <class S>
LpResult<S> simplex_solve(const StandardLp<S>& lp, const SimplexOptions& options = {}) {
  using Tr = simplex_detail::Traits<S>;
  const std::size_t m = lp.m, n = lp.n;
  const std::size_t width = n + m + 1;
  const std::size_t rhs = n + m;

  std::vector<S> t(m * width, S{});
  std::vector<std::size_t> basis(m);
  std::vector<bool> row_flip(m, false);

  auto at = [&](std::size_t r, std::size_t c) -> S& { return t[r * width + c]; };

  auto original_entry = [&](std::size_t row, std::size_t col) -> S {
    S v{};
    if (col < n)
      v = lp.a[row * n + col];
    else if (col < n + m)
      v = col - n == row ? S{1} : S{};
    else
      v = lp.b[row];
    if (row_flip[row] && col < n + m && col >= n) return v;  // identity kept positive
    return row_flip[row] ? S{-v} : v;
  };

  // rebuild the tableau from original data for the given basis; false if
  // the basis matrix is singular
  auto refactor = [&](const std::vector<std::size_t>& new_basis) -> bool {
    std::vector<S> w(m * 2 * m, S{});
    auto wat = [&](std::size_t r, std::size_t c) -> S& { return w[r * 2 * m + c]; };
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t r = 0; r < m; ++r) wat(r, i) = original_entry(r, new_basis[i]);
      wat(i, m + i) = 1;
    }
    for (std::size_t col = 0; col < m; ++col) {
      std::size_t piv = col;
      if constexpr (Tr::exact) {
        while (piv < m && wat(piv, col) == 0) ++piv;
        if (piv == m) return false;
      } else {
        S best = simplex_detail::abs_value(wat(col, col));
        for (std::size_t r = col + 1; r < m; ++r) {
          S cand = simplex_detail::abs_value(wat(r, col));
          if (cand > best) {
            best = cand;
            piv = r;
          }
        }
        if (!(best > S{1e-11})) return false;
      }
      if (piv != col)
        for (std::size_t c2 = 0; c2 < 2 * m; ++c2) std::swap(wat(piv, c2), wat(col, c2));
      S inv = S{1} / wat(col, col);
      for (std::size_t c2 = 0; c2 < 2 * m; ++c2) wat(col, c2) *= inv;
      for (std::size_t r = 0; r < m; ++r) {
        if (r == col) continue;
        S f = wat(r, col);
        if (f == 0) continue;
        for (std::size_t c2 = 0; c2 < 2 * m; ++c2) wat(r, c2) -= f * wat(col, c2);
      }
    }
    // t <- B^{-1} [A | I | b], streamed row by row for locality
    std::fill(t.begin(), t.end(), S{});
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t k = 0; k < m; ++k) {
        const S& f = wat(r, m + k);
        if (f == 0) continue;
        const S fk = row_flip[k] ? S{-f} : f;
        const S* arow = &lp.a[k * n];
        S* trow = &t[r * width];
        for (std::size_t c2 = 0; c2 < n; ++c2)
          if (arow[c2] != 0) trow[c2] += fk * arow[c2];
        trow[n + k] += f;
        if (lp.b[k] != 0) trow[rhs] += fk * lp.b[k];
      }
    }
    basis = new_basis;
    return true;
  };

  std::vector<S> d(width, S{});

  auto pivot = [&](std::size_t prow, std::size_t pcol) {
    S inv = at(prow, pcol);
    for (std::size_t j = 0; j < width; ++j) at(prow, j) /= inv;
    at(prow, pcol) = 1;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == prow) continue;
      S f = at(i, pcol);
      if (f == 0) continue;
      for (std::size_t j = 0; j < width; ++j) at(i, j) -= f * at(prow, j);
      at(i, pcol) = 0;
    }
    S f = d[pcol];
    if (f != 0) {
      for (std::size_t j = 0; j < width; ++j) d[j] -= f * at(prow, j);
      d[pcol] = 0;
    }
    basis[prow] = pcol;
  };

  auto rebuild_costs = [&](bool phase_one) {
    std::fill(d.begin(), d.end(), S{});
    if (phase_one) {
      // artificial costs 1, structural costs 0; artificial d entries are
      // never read because artificials do not re-enter
      for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        for (std::size_t j = 0; j < n; ++j) d[j] -= at(i, j);
        d[rhs] -= at(i, rhs);
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) d[j] = lp.c[j];
      for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= n) continue;
        S cb = lp.c[basis[i]];
        if (cb == 0) continue;
        for (std::size_t j = 0; j < width; ++j) d[j] -= cb * at(i, j);
      }
    }
  };

  // Lexicographic leaving rule: candidates within the ratio tie window get
  // filtered column by column against the run-start basis (whose tableau
  // block is the identity at run start, so every row begins lex-positive
  // and degenerate plateaus cannot cycle).  Slightly negative rhs from
  // rounding counts as zero.
  std::vector<std::size_t> lex_ref;
  std::vector<std::size_t> cand;
  std::vector<std::size_t> keep;

  auto ratio_row = [&](std::size_t pcol) -> std::ptrdiff_t {
    cand.clear();
    S best{};
    for (std::size_t i = 0; i < m; ++i) {
      const S& a = at(i, pcol);
      if (!(a > Tr::pivot_tol())) continue;
      S r = at(i, rhs) / a;
      if (r < 0) r = S{};
      if (cand.empty() || r < best - Tr::tie_tol()) {
        cand.assign(1, i);
        best = r;
      } else if (!(r > best + Tr::tie_tol())) {
        cand.push_back(i);
        if (r < best) best = r;
      }
    }
    if (cand.empty()) return -1;
    for (std::size_t k = 0; k < lex_ref.size() && cand.size() > 1; ++k) {
      std::size_t col = lex_ref[k];
      keep.clear();
      S mn{};
      bool first = true;
      for (std::size_t i : cand) {
        S v = at(i, col) / at(i, pcol);
        if constexpr (!Tr::exact) {
          if (simplex_detail::abs_value(v) < S{1e-11}) v = S{};  // snap fill-in noise
        }
        if (first || v < mn) {
          mn = v;
          first = false;
        }
      }
      for (std::size_t i : cand) {
        S v = at(i, col) / at(i, pcol);
        if constexpr (!Tr::exact) {
          if (simplex_detail::abs_value(v) < S{1e-11}) v = S{};
        }
        if (!(v > mn + Tr::tie_tol())) keep.push_back(i);
      }
      cand.swap(keep);
    }
    return static_cast<std::ptrdiff_t>(cand.front());
  };

  auto run = [&](bool phase_one) -> LpStatus {
    lex_ref = basis;
    long iterations = 0;
    long since_refactor = 0;
    const long limit = 100000;
    for (;;) {
      if (++iterations > limit) throw std::runtime_error("simplex: iteration limit hit");
      if constexpr (!Tr::exact) {
        if (++since_refactor >= options.refactor_every) {
          since_refactor = 0;
          std::vector<std::size_t> cur = basis;
          if (refactor(cur)) rebuild_costs(phase_one);
        }
      }
      std::ptrdiff_t enter = -1;
      S best{};
      for (std::size_t j = 0; j < n; ++j) {
        if (!(d[j] < -Tr::cost_tol())) continue;
        if (enter < 0 || d[j] < best) {
          enter = static_cast<std::ptrdiff_t>(j);
          best = d[j];
        }
      }
      if (enter < 0) return LpStatus::optimal;
      std::ptrdiff_t leave = ratio_row(static_cast<std::size_t>(enter));
      if (leave < 0) return LpStatus::unbounded;
      pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter));
    }
  };

  // --- start -----------------------------------------------------------
  bool warm = false;
  if (!options.start_basis.empty()) {
    if (options.start_basis.size() != m)
      throw std::invalid_argument("simplex: start basis size mismatch");
    warm = refactor(options.start_basis);
    if (warm) {
      for (std::size_t i = 0; i < m && warm; ++i)
        if (at(i, rhs) < -Tr::feas_tol()) warm = false;
      if (warm) {
        if constexpr (!Tr::exact) {
          for (std::size_t i = 0; i < m; ++i)
            if (at(i, rhs) < 0) at(i, rhs) = 0;  // clamp factorization noise
        }
      }
    }
  }

  LpResult<S> res;
  if (!warm) {
    // artificial cold start: flip rows so the artificial basis is feasible
    std::fill(t.begin(), t.end(), S{});
    for (std::size_t i = 0; i < m; ++i) {
      row_flip[i] = lp.b[i] < 0;
      for (std::size_t j = 0; j < n; ++j)
        at(i, j) = row_flip[i] ? S{-lp.a[i * n + j]} : lp.a[i * n + j];
      at(i, n + i) = 1;
      at(i, rhs) = row_flip[i] ? S{-lp.b[i]} : lp.b[i];
      basis[i] = n + i;
    }
    rebuild_costs(true);
    if (run(true) != LpStatus::optimal)
      throw std::runtime_error("simplex: phase 1 unbounded (internal error)");
    S infeas = -d[rhs];
    if (infeas > Tr::feas_tol()) {
      res.status = LpStatus::infeasible;
      return res;
    }
    // drive leftover artificials out where possible; rows without
    // structural support are redundant and stay inert at zero
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (simplex_detail::abs_value(at(i, j)) > Tr::pivot_tol()) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  rebuild_costs(false);
  res.status = run(false);
  if (res.status != LpStatus::optimal) return res;

  res.x.assign(n, S{});
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) {
      S v = at(i, rhs);
      if constexpr (!Tr::exact) {
        if (v < 0) v = 0;  // terminal rounding noise
      }
      res.x[basis[i]] = v;
    }
  res.objective = S{};
  for (std::size_t j = 0; j < n; ++j)
    if (res.x[j] != 0 && lp.c[j] != 0) res.objective += lp.c[j] * res.x[j];
  return res;
}

}  // namespace qap
