#include "qap/facets.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <stdexcept>

#include "qap/affine_hull.hpp"
#include "qap/parallel.hpp"
#include "qap/rng.hpp"

namespace qap {

namespace {

void check_cell(int n, int i, int j, const char* what) {
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw FamilyError(std::string(what) + ": cell out of range");
}

}  // namespace

LinearInequality expand_generic(const GenericInequality& g) {
  if (g.coeffs.empty()) throw std::invalid_argument("expand_generic: no coefficients");
  LinearInequality out;
  out.n = g.n;
  const long long two_beta_minus_1 = 2 * g.beta - 1;
  for (const auto& [cell, v] : g.coeffs) {
    if (v == 0) continue;
    long long d = v * v - two_beta_minus_1 * v;
    if (d != 0) out.diag[cell] = to_rational(d);
  }
  // ordered double sum over distinct cells, folded onto p < q with factor 2
  for (auto it1 = g.coeffs.begin(); it1 != g.coeffs.end(); ++it1) {
    if (it1->second == 0) continue;
    int p = cell_index(g.n, it1->first.first, it1->first.second);
    for (auto it2 = std::next(it1); it2 != g.coeffs.end(); ++it2) {
      if (it2->second == 0) continue;
      int q = cell_index(g.n, it2->first.first, it2->first.second);
      long long c = 2 * it1->second * it2->second;
      if (c == 0) continue;
      out.off[{std::min(p, q), std::max(p, q)}] = to_rational(c);
    }
  }
  out.constant = to_rational(g.beta * g.beta - g.beta);
  return out;
}

Rational evaluate_at_vertex(const GenericInequality& g, const Permutation& sigma) {
  if (sigma.n() != g.n) throw std::invalid_argument("evaluate_at_vertex: size mismatch");
  long long s = 0;
  for (const auto& [cell, v] : g.coeffs)
    if (sigma(cell.first) == cell.second) s += v;
  long long t = s - g.beta;
  return to_rational(t * (t + 1));
}

Rational evaluate_linear_at_vertex(const LinearInequality& ineq, const Permutation& sigma) {
  if (sigma.n() != ineq.n) throw std::invalid_argument("evaluate_linear_at_vertex: size mismatch");
  Rational acc = ineq.constant;
  for (const auto& [cell, c] : ineq.diag)
    if (sigma(cell.first) == cell.second) acc += c;
  for (const auto& [pq, c] : ineq.off) {
    auto [i, j] = cell_of(ineq.n, pq.first);
    auto [k, l] = cell_of(ineq.n, pq.second);
    if (sigma(i) == j && sigma(k) == l) acc += c;
  }
  return acc;
}

GenericInequality make_nonneg(int n, int i, int j, int k, int l) {
  check_cell(n, i, j, "make_nonneg");
  check_cell(n, k, l, "make_nonneg");
  if (i == k) throw FamilyError("make_nonneg: rows coincide (i = k = " + std::to_string(i + 1) + ")");
  if (j == l) throw FamilyError("make_nonneg: columns coincide (j = l = " + std::to_string(j + 1) + ")");
  GenericInequality g;
  g.n = n;
  g.beta = 1;
  g.coeffs[{i, j}] = 1;
  g.coeffs[{k, l}] = 1;
  return g;
}

GenericInequality make_triple(int n, int p1, int q1, int p2, int q2, int k, int l) {
  check_cell(n, p1, q1, "make_triple");
  check_cell(n, p2, q2, "make_triple");
  check_cell(n, k, l, "make_triple");
  if (p1 == p2 || p1 == k || p2 == k)
    throw FamilyError("make_triple: row indices p1, p2, k must be pairwise distinct");
  if (q1 == q2 || q1 == l || q2 == l)
    throw FamilyError("make_triple: column indices q1, q2, l must be pairwise distinct");
  GenericInequality g;
  g.n = n;
  g.beta = 1;
  g.coeffs[{p1, q1}] = 1;
  g.coeffs[{p2, q2}] = 1;
  g.coeffs[{p1, q2}] = 1;
  g.coeffs[{k, l}] = -1;
  return g;
}

MtermInstance make_mterm_instance(int n, std::vector<std::pair<int, int>> pairs, int k, int l) {
  int m = static_cast<int>(pairs.size());
  if (m < 3 || m > n - 3)
    throw FamilyError("make_mterm: m = " + std::to_string(m) + " outside 3 <= m <= n-3");
  check_cell(n, k, l, "make_mterm");
  std::set<int> rows{k}, cols{l};
  for (auto [i, j] : pairs) {
    check_cell(n, i, j, "make_mterm");
    if (!rows.insert(i).second)
      throw FamilyError("make_mterm: row " + std::to_string(i + 1) + " reused");
    if (!cols.insert(j).second)
      throw FamilyError("make_mterm: column " + std::to_string(j + 1) + " reused");
  }
  std::sort(pairs.begin(), pairs.end());
  return MtermInstance{n, std::move(pairs), k, l};
}

GenericInequality to_generic(const MtermInstance& inst) {
  GenericInequality g;
  g.n = inst.n;
  g.beta = 1;
  for (auto [i, j] : inst.pairs) g.coeffs[{i, j}] = 1;
  g.coeffs[{inst.k, inst.l}] = -1;
  return g;
}

GenericInequality make_mterm(int n, const std::vector<std::pair<int, int>>& pairs, int k, int l) {
  return to_generic(make_mterm_instance(n, pairs, k, l));
}

GenericInequality make_box(int n, const std::vector<int>& p1, const std::vector<int>& p2,
                           const std::vector<int>& q1, const std::vector<int>& q2,
                           long long beta) {
  auto check_set = [n](const std::vector<int>& s, const char* name) {
    std::set<int> seen;
    for (int v : s) {
      if (v < 0 || v >= n) throw FamilyError(std::string("make_box: ") + name + " out of range");
      if (!seen.insert(v).second)
        throw FamilyError(std::string("make_box: ") + name + " has repeats");
    }
  };
  check_set(p1, "P1");
  check_set(p2, "P2");
  check_set(q1, "Q1");
  check_set(q2, "Q2");
  for (int v : p1)
    if (std::find(p2.begin(), p2.end(), v) != p2.end())
      throw FamilyError("make_box: P1 and P2 intersect at " + std::to_string(v + 1));
  for (int v : q1)
    if (std::find(q2.begin(), q2.end(), v) != q2.end())
      throw FamilyError("make_box: Q1 and Q2 intersect at " + std::to_string(v + 1));
  if ((p1.size() + p2.size()) == 0 || (q1.size() + q2.size()) == 0)
    throw FamilyError("make_box: no cells selected, inequality would be empty");
  GenericInequality g;
  g.n = n;
  g.beta = beta;
  for (int i : p1)
    for (int j : q1) g.coeffs[{i, j}] = -1;
  for (int i : p2)
    for (int j : q2) g.coeffs[{i, j}] = -1;
  for (int i : p1)
    for (int j : q2) g.coeffs[{i, j}] = 1;
  for (int i : p2)
    for (int j : q1) g.coeffs[{i, j}] = 1;
  return g;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::nonneg: return "nonneg";
    case Family::triple: return "triple";
    case Family::mterm: return "mterm";
    case Family::box_samples: return "box";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "nonneg") return Family::nonneg;
  if (name == "triple") return Family::triple;
  if (name == "mterm") return Family::mterm;
  if (name == "box") return Family::box_samples;
  throw std::invalid_argument("unknown family '" + name + "'");
}

long long family_formula_term(int m, int n) {
  if (m < 1 || m > n) throw std::invalid_argument("family_formula_term: bad m");
  long long num = 1;
  for (int t = 0; t <= m; ++t) num *= static_cast<long long>(n - t) * (n - t);
  long long fact = 1;
  for (int t = 2; t <= m; ++t) fact *= t;
  return num / fact;
}

namespace {

FamilyEnumeration enumerate_nonneg(int n) {
  FamilyEnumeration out;
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          if (l == j) continue;
          out.instances.push_back(make_nonneg(n, i, j, k, l));
        }
  out.count = static_cast<long long>(out.instances.size());
  return out;
}

FamilyEnumeration enumerate_triple(int n) {
  FamilyEnumeration out;
  for (int p1 = 0; p1 < n; ++p1)
    for (int p2 = 0; p2 < n; ++p2) {
      if (p2 == p1) continue;
      for (int k = 0; k < n; ++k) {
        if (k == p1 || k == p2) continue;
        for (int q1 = 0; q1 < n; ++q1)
          for (int q2 = 0; q2 < n; ++q2) {
            if (q2 == q1) continue;
            for (int l = 0; l < n; ++l) {
              if (l == q1 || l == q2) continue;
              out.instances.push_back(make_triple(n, p1, q1, p2, q2, k, l));
            }
          }
      }
    }
  out.count = static_cast<long long>(out.instances.size());
  return out;
}

void next_combination_done(std::vector<int>& comb, int n, bool& done) {
  int m = static_cast<int>(comb.size());
  int idx = m - 1;
  while (idx >= 0 && comb[static_cast<std::size_t>(idx)] == n - m + idx) --idx;
  if (idx < 0) {
    done = true;
    return;
  }
  ++comb[static_cast<std::size_t>(idx)];
  for (int t = idx + 1; t < m; ++t)
    comb[static_cast<std::size_t>(t)] = comb[static_cast<std::size_t>(t - 1)] + 1;
}

FamilyEnumeration enumerate_mterm(int n, int m) {
  FamilyEnumeration out;
  std::vector<int> rows(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) rows[static_cast<std::size_t>(t)] = t;
  bool rows_done = false;
  while (!rows_done) {
    // ordered tuples of distinct columns, lexicographic
    std::vector<int> cols(static_cast<std::size_t>(m), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    int depth = 0;
    while (depth >= 0) {
      if (depth == m) {
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(static_cast<std::size_t>(m));
        for (int t = 0; t < m; ++t)
          pairs.emplace_back(rows[static_cast<std::size_t>(t)], cols[static_cast<std::size_t>(t)]);
        for (int k = 0; k < n; ++k) {
          if (std::find(rows.begin(), rows.end(), k) != rows.end()) continue;
          for (int l = 0; l < n; ++l) {
            if (used[static_cast<std::size_t>(l)]) continue;
            out.instances.push_back(make_mterm(n, pairs, k, l));
          }
        }
        --depth;
        continue;
      }
      int& c = cols[static_cast<std::size_t>(depth)];
      if (c >= 0) used[static_cast<std::size_t>(c)] = false;
      ++c;
      while (c < n && used[static_cast<std::size_t>(c)]) ++c;
      if (c >= n) {
        c = -1;
        --depth;
        continue;
      }
      used[static_cast<std::size_t>(c)] = true;
      ++depth;
    }
    next_combination_done(rows, n, rows_done);
  }
  out.count = static_cast<long long>(out.instances.size());
  return out;
}

FamilyEnumeration enumerate_box_samples(int n, int samples, std::uint64_t seed) {
  FamilyEnumeration out;
  Rng rng(seed);
  std::set<std::string> seen;
  int attempts = 0;
  while (static_cast<int>(out.instances.size()) < samples && attempts < samples * 50) {
    ++attempts;
    std::vector<int> rows(static_cast<std::size_t>(n)), cols(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) rows[static_cast<std::size_t>(t)] = cols[static_cast<std::size_t>(t)] = t;
    rng.shuffle(rows);
    rng.shuffle(cols);
    int s1 = static_cast<int>(rng.int_in(0, n / 2));
    int s2 = static_cast<int>(rng.int_in(s1 == 0 ? 1 : 0, n / 2));
    int t1 = static_cast<int>(rng.int_in(0, n / 2));
    int t2 = static_cast<int>(rng.int_in(t1 == 0 ? 1 : 0, n / 2));
    std::vector<int> p1(rows.begin(), rows.begin() + s1);
    std::vector<int> p2(rows.begin() + s1, rows.begin() + s1 + s2);
    std::vector<int> q1(cols.begin(), cols.begin() + t1);
    std::vector<int> q2(cols.begin() + t1, cols.begin() + t1 + t2);
    long long beta = rng.int_in(-2, 3);
    GenericInequality g = make_box(n, p1, p2, q1, q2, beta);
    std::string key = std::to_string(g.beta);
    for (const auto& [cell, v] : g.coeffs)
      key += "|" + std::to_string(cell.first) + "," + std::to_string(cell.second) + ":" +
             std::to_string(v);
    if (seen.insert(key).second) out.instances.push_back(std::move(g));
  }
  out.count = static_cast<long long>(out.instances.size());
  return out;
}

}  // namespace

FamilyEnumeration enumerate_family(Family f, int n, const FamilyOptions& opts) {
  switch (f) {
    case Family::nonneg:
      if (n < 2) throw std::invalid_argument("nonneg family needs n >= 2");
      return enumerate_nonneg(n);
    case Family::triple:
      if (n < 6) throw std::invalid_argument("triple family needs n >= 6");
      return enumerate_triple(n);
    case Family::mterm:
      if (n < 6) throw std::invalid_argument("mterm family needs n >= 6");
      if (opts.m < 3 || opts.m > n - 3)
        throw std::invalid_argument("mterm family needs 3 <= m <= n-3");
      return enumerate_mterm(n, opts.m);
    case Family::box_samples:
      if (n < 2) throw std::invalid_argument("box family needs n >= 2");
      return enumerate_box_samples(n, opts.samples, opts.seed);
  }
  throw std::invalid_argument("enumerate_family: unknown family");
}

long long family_count(Family f, int n, const FamilyOptions& opts) {
  switch (f) {
    case Family::nonneg:
      return static_cast<long long>(n) * n * (n - 1) * (n - 1) / 2;
    case Family::triple: {
      long long ordered = static_cast<long long>(n) * (n - 1) * (n - 2);
      return ordered * ordered;
    }
    case Family::mterm:
      return family_formula_term(opts.m, n);
    case Family::box_samples:
      return enumerate_family(f, n, opts).count;
  }
  throw std::invalid_argument("family_count: unknown family");
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::invalid: return "invalid";
    case Verdict::valid_not_supporting: return "valid-not-supporting";
    case Verdict::face: return "face";
    case Verdict::facet: return "facet";
  }
  return "?";
}

FacetCertificate certify(const LinearInequality& ineq, int n, RankMode mode,
                         const ModpOptions& opts) {
  if (n < 2 || n > 7) throw std::invalid_argument("certify: guarded to 2 <= n <= 7");
  if (ineq.n != n) throw std::invalid_argument("certify: inequality size mismatch");

  auto perms = enumerate_permutations(n);
  std::vector<signed char> tight(perms.size(), 0);
  std::atomic<bool> all_valid{true};
  parallel_for(perms.size(), [&](std::size_t idx) {
    Rational v = evaluate_linear_at_vertex(ineq, perms[idx]);
    if (v == 0)
      tight[idx] = 1;
    else if (v < 0)
      all_valid.store(false, std::memory_order_relaxed);
  });

  FacetCertificate cert;
  cert.n = n;
  cert.mode = mode;
  cert.valid = all_valid.load();
  cert.polytope_dim = n >= 4 ? dimension_formula(n) : affine_dimension(n, RankMode::exact);

  std::vector<std::size_t> tight_idx;
  for (std::size_t i = 0; i < perms.size(); ++i)
    if (tight[i]) tight_idx.push_back(i);
  cert.tight_count = static_cast<long long>(tight_idx.size());
  cert.degenerate = cert.tight_count == static_cast<long long>(perms.size());

  if (!tight_idx.empty()) {
    long long cols = canon_count(n);
    if (mode == RankMode::modp) {
      auto fill = [&](std::size_t r, std::vector<std::uint64_t>& row) {
        for (auto [p, q] : vertex(perms[tight_idx[r]]).pairs)
          row[static_cast<std::size_t>(canon_index(n, p, q))] = 1;
        row[static_cast<std::size_t>(cols)] = 1;
      };
      cert.tight_affine_dim =
          static_cast<long long>(modp_rank_streaming_multi(
              tight_idx.size(), static_cast<std::size_t>(cols) + 1, fill, opts)) -
          1;
    } else {
      DenseMatrix m(tight_idx.size(), static_cast<std::size_t>(cols));
      for (std::size_t r = 0; r < tight_idx.size(); ++r)
        for (auto [p, q] : vertex(perms[tight_idx[r]]).pairs)
          m.at(r, static_cast<std::size_t>(canon_index(n, p, q))) = 1;
      cert.tight_affine_dim = affine_rank(m, RankMode::exact);
    }
  }

  if (!cert.valid)
    cert.verdict = Verdict::invalid;
  else if (cert.tight_count == 0 || cert.degenerate)
    cert.verdict = Verdict::valid_not_supporting;
  else if (cert.tight_affine_dim == cert.polytope_dim - 1)
    cert.verdict = Verdict::facet;
  else
    cert.verdict = Verdict::face;
  return cert;
}

VertexClass classify_vertex(const MtermInstance& inst, const Permutation& sigma) {
  if (sigma.n() != inst.n) throw std::invalid_argument("classify_vertex: size mismatch");
  bool kl = sigma(inst.k) == inst.l;
  int matches = 0;
  for (auto [i, j] : inst.pairs)
    if (sigma(i) == j) ++matches;
  long long s = matches - (kl ? 1 : 0);
  long long value = (s - 1) * s;
  if (value == 0) return VertexClass{VertexClass::S, matches};
  if (kl && matches == 0) return VertexClass{VertexClass::T1, 0};
  if (kl && matches >= 3) return VertexClass{VertexClass::T2, matches};
  if (!kl && matches >= 2) return VertexClass{VertexClass::T3, matches};
  throw std::logic_error("classify_vertex: unreachable class");
}

}  // namespace qap
