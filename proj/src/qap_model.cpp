#include "qap/qap_model.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "qap/affine_hull.hpp"

namespace qap {

namespace {

struct Tokenizer {
  const std::string& text;
  std::size_t pos = 0;
  long line = 1;
  long token_no = 0;

  explicit Tokenizer(const std::string& t) : text(t) {}

  std::optional<std::string> next() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      if (text[pos] == '\n') ++line;
      ++pos;
    }
    if (pos >= text.size()) return std::nullopt;
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    ++token_no;
    return text.substr(start, pos - start);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("parse error at line " + std::to_string(line) + ", token " +
                     std::to_string(token_no) + ": " + what);
  }
};

Rational read_rational(Tokenizer& tok, const char* what) {
  auto t = tok.next();
  if (!t) tok.fail(std::string("missing ") + what);
  try {
    return parse_rational(*t);
  } catch (const std::invalid_argument&) {
    tok.fail(std::string("expected a number for ") + what + ", got '" + *t + "'");
  }
}

template <class S>
S to_scalar(const Rational& r);

template <>
double to_scalar<double>(const Rational& r) {
  return r.get_d();
}

template <>
Rational to_scalar<Rational>(const Rational& r) {
  return r;
}

}  // namespace

QapInstance parse_qaplib(const std::string& text) {
  Tokenizer tok(text);
  auto first = tok.next();
  if (!first) tok.fail("empty instance");
  long n = 0;
  try {
    std::size_t used = 0;
    n = std::stol(*first, &used);
    if (used != first->size()) throw std::invalid_argument("");
  } catch (...) {
    tok.fail("expected the size n, got '" + *first + "'");
  }
  if (n < 1 || n > 64) tok.fail("size n = " + std::to_string(n) + " out of range");

  QapInstance inst;
  inst.n = static_cast<int>(n);
  inst.flows.reserve(static_cast<std::size_t>(n) * n);
  inst.distances.reserve(static_cast<std::size_t>(n) * n);
  for (long k = 0; k < n * n; ++k) inst.flows.push_back(read_rational(tok, "flow entry"));
  for (long k = 0; k < n * n; ++k) inst.distances.push_back(read_rational(tok, "distance entry"));
  if (auto extra = tok.next())
    tok.fail("unexpected trailing token '" + *extra + "'");
  return inst;
}

std::string serialize_qaplib(const QapInstance& inst) {
  std::ostringstream out;
  out << inst.n << "\n";
  auto dump = [&](const std::vector<Rational>& m) {
    for (int i = 0; i < inst.n; ++i) {
      for (int j = 0; j < inst.n; ++j) {
        if (j) out << ' ';
        out << rational_to_string(m[static_cast<std::size_t>(i) * inst.n + j]);
      }
      out << '\n';
    }
  };
  dump(inst.flows);
  dump(inst.distances);
  return out.str();
}

Rational permutation_cost(const QapInstance& inst, const Permutation& sigma) {
  if (sigma.n() != inst.n) throw std::invalid_argument("permutation_cost: size mismatch");
  Rational acc = 0;
  for (int i = 0; i < inst.n; ++i)
    for (int k = 0; k < inst.n; ++k) acc += inst.flow(i, k) * inst.dist(sigma(i), sigma(k));
  for (const auto& [cell, c] : inst.linear)
    if (sigma(cell.first) == cell.second) acc += c;
  return acc;
}

std::pair<Rational, Permutation> brute_force_optimum(const QapInstance& inst) {
  if (inst.n > 10) throw std::invalid_argument("brute_force_optimum: guarded to n <= 10");
  std::optional<Rational> best;
  Permutation arg;
  for_each_permutation(inst.n, [&](const Permutation& p) {
    Rational c = permutation_cost(inst, p);
    if (!best || c < *best) {
      best = c;
      arg = p;
    }
  });
  return {*best, arg};
}

int LpModel::lookup(int p, int q) const {
  if (p > q) std::swap(p, q);
  auto it = var_index.find({p, q});
  return it == var_index.end() ? -1 : it->second;
}

LpModel build_lp(int n, const std::vector<LinearInequality>& cuts) {
  LpModel model;
  model.n = n;
  auto sys = build_equation_system(n, CoordMode::canonical);
  auto pinned = pinned_coordinates(n);
  auto is_pinned = [&](int p, int q) {
    return std::binary_search(pinned.begin(), pinned.end(), canon_index(n, p, q));
  };

  int N = n * n;
  for (int p = 0; p < N; ++p)
    for (int q = p; q < N; ++q) {
      if (is_pinned(p, q)) continue;
      model.var_index[{p, q}] = static_cast<int>(model.vars.size());
      model.vars.emplace_back(p, q);
    }

  std::vector<std::vector<std::pair<int, Rational>>> raw_rows;
  std::vector<Rational> raw_rhs;
  for (const auto& eq : sys.equations) {
    if (eq.tag == EqTag::zero_block || eq.tag == EqTag::symmetry) continue;
    std::vector<std::pair<int, Rational>> row;
    for (const auto& t : eq.terms) {
      int v = model.lookup(t.p, t.q);
      if (v >= 0) row.emplace_back(v, t.coeff);
    }
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (row.empty()) {
      if (eq.rhs != 0) throw std::logic_error("build_lp: empty row with nonzero rhs");
      continue;
    }
    raw_rows.push_back(std::move(row));
    raw_rhs.push_back(eq.rhs);
  }

  // the system emits its redundant members by design; keep an independent
  // subset (checked over [coefficients | rhs]) so the simplex basis stays
  // small and the degeneracy mild
  std::uint64_t p = modp_prime_pool()[0];
  std::size_t cols = model.vars.size() + 1;
  auto fill = [&](std::size_t r, std::vector<std::uint64_t>& out) {
    for (const auto& [v, c] : raw_rows[r]) {
      std::uint64_t num = mpz_fdiv_ui(c.get_num().get_mpz_t(), p);
      out[static_cast<std::size_t>(v)] = num;  // coefficients are +-1 here
    }
    out[cols - 1] = mpz_fdiv_ui(raw_rhs[r].get_num().get_mpz_t(), p);
  };
  for (std::size_t r : modp_independent_rows(raw_rows.size(), cols, fill, p)) {
    model.eq_rows.push_back(std::move(raw_rows[r]));
    model.eq_rhs.push_back(raw_rhs[r]);
  }
  model.cuts = cuts;
  return model;
}

std::vector<Rational> objective_vector(const QapInstance& inst, const LpModel& model) {
  if (inst.n != model.n) throw std::invalid_argument("objective_vector: size mismatch");
  std::vector<Rational> c(model.vars.size());
  for (std::size_t v = 0; v < model.vars.size(); ++v) {
    auto [p, q] = model.vars[v];
    auto [i, j] = cell_of(inst.n, p);
    auto [k, l] = cell_of(inst.n, q);
    if (p == q) {
      c[v] = inst.flow(i, i) * inst.dist(j, j);
      auto it = inst.linear.find({i, j});
      if (it != inst.linear.end()) c[v] += it->second;
    } else {
      c[v] = inst.flow(i, k) * inst.dist(j, l) + inst.flow(k, i) * inst.dist(l, j);
    }
  }
  return c;
}

namespace {

template <class S>
StandardLp<S> assemble(const LpModel& model, const std::vector<Rational>& objective) {
  if (objective.size() != model.vars.size())
    throw std::invalid_argument("assemble: objective length mismatch");
  StandardLp<S> lp;
  std::size_t nv = model.vars.size();
  std::size_t nc = model.cuts.size();
  lp.n = nv + nc;  // slack per cut
  lp.m = model.eq_rows.size() + nc;
  lp.a.assign(lp.m * lp.n, S{});
  lp.b.assign(lp.m, S{});
  lp.c.assign(lp.n, S{});

  for (std::size_t r = 0; r < model.eq_rows.size(); ++r) {
    for (const auto& [v, coef] : model.eq_rows[r])
      lp.a[r * lp.n + static_cast<std::size_t>(v)] = to_scalar<S>(coef);
    lp.b[r] = to_scalar<S>(model.eq_rhs[r]);
  }
  for (std::size_t cix = 0; cix < nc; ++cix) {
    const LinearInequality& cut = model.cuts[cix];
    std::size_t r = model.eq_rows.size() + cix;
    for (const auto& [cell, coef] : cut.diag) {
      int p = cell_index(model.n, cell.first, cell.second);
      int v = model.lookup(p, p);
      if (v >= 0) lp.a[r * lp.n + static_cast<std::size_t>(v)] += to_scalar<S>(coef);
    }
    for (const auto& [pq, coef] : cut.off) {
      int v = model.lookup(pq.first, pq.second);
      if (v >= 0) lp.a[r * lp.n + static_cast<std::size_t>(v)] += to_scalar<S>(coef);
    }
    lp.a[r * lp.n + nv + cix] = to_scalar<S>(Rational(-1));
    lp.b[r] = to_scalar<S>(-cut.constant);
  }
  for (std::size_t v = 0; v < nv; ++v) lp.c[v] = to_scalar<S>(objective[v]);
  return lp;
}

}  // namespace

namespace {

// Greedy independent column selection (floating); preferred columns first,
// then everything else in index order.  Returns empty when it cannot reach
// a full basis or a preferred column gets rejected.
std::vector<std::size_t> greedy_basis(const StandardLp<double>& lp,
                                      const std::vector<std::size_t>& preferred) {
  const std::size_t m = lp.m;
  std::vector<std::vector<double>> pivots;
  std::vector<std::size_t> pivot_rows;
  std::vector<std::size_t> chosen;
  std::vector<char> used(lp.n, 0);

  auto try_add = [&](std::size_t col) {
    if (col >= lp.n || used[col] || chosen.size() == m) return false;
    std::vector<double> v(m);
    for (std::size_t r = 0; r < m; ++r) v[r] = lp.a[r * lp.n + col];
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      double f = v[pivot_rows[k]];
      if (f == 0) continue;
      const auto& pv = pivots[k];
      for (std::size_t r = 0; r < m; ++r) v[r] -= f * pv[r];
    }
    std::size_t arg = 0;
    double best = 0;
    for (std::size_t r = 0; r < m; ++r)
      if (std::abs(v[r]) > best) {
        best = std::abs(v[r]);
        arg = r;
      }
    if (best < 1e-7) return false;
    double inv = 1.0 / v[arg];
    for (auto& x : v) x *= inv;
    pivots.push_back(std::move(v));
    pivot_rows.push_back(arg);
    chosen.push_back(col);
    used[col] = 1;
    return true;
  };

  for (std::size_t col : preferred)
    if (!try_add(col)) return {};
  for (std::size_t col = 0; col < lp.n && chosen.size() < m; ++col) try_add(col);
  if (chosen.size() != m) return {};
  return chosen;
}

// Feasible start from a known vertex: its support columns plus every cut
// slack form the positive part of a basic solution, completed greedily.
std::vector<std::size_t> crash_basis(const LpModel& model, const StandardLp<double>& lp) {
  std::vector<std::size_t> preferred;
  for (std::size_t k = 0; k < model.cuts.size(); ++k) preferred.push_back(model.vars.size() + k);
  auto v = vertex(Permutation::identity(model.n));
  for (auto [p, q] : v.pairs) {
    int var = model.lookup(p, q);
    if (var < 0) return {};  // vertex support must be live
    preferred.push_back(static_cast<std::size_t>(var));
  }
  return greedy_basis(lp, preferred);
}

}  // namespace

LpSolution solve_lp(const LpModel& model, const std::vector<Rational>& objective) {
  auto lp = assemble<double>(model, objective);
  SimplexOptions opts;
  opts.start_basis = crash_basis(model, lp);
  auto res = simplex_solve(lp, opts);
  LpSolution out;
  out.status = res.status;
  if (res.status == LpStatus::optimal) {
    out.value = res.objective;
    out.x.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(model.vars.size()));
  }
  return out;
}

ExactLpSolution solve_lp_exact(const LpModel& model, const std::vector<Rational>& objective) {
  if (model.n > 4)
    throw std::invalid_argument("solve_lp_exact: exact simplex guarded to n <= 4");
  auto lp = assemble<Rational>(model, objective);
  auto res = simplex_solve(lp);
  ExactLpSolution out;
  out.status = res.status;
  if (res.status == LpStatus::optimal) {
    out.value = res.objective;
    out.x.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(model.vars.size()));
  }
  return out;
}

namespace {

std::string generic_key(const GenericInequality& g) {
  std::string key = "b" + std::to_string(g.beta);
  for (const auto& [cell, v] : g.coeffs)
    key += "|" + std::to_string(cell.first) + "," + std::to_string(cell.second) + ":" +
           std::to_string(v);
  return key;
}

class PointView {
 public:
  PointView(const LpModel& model, const std::vector<double>& x) : model_(model), x_(x) {}

  // value of the canonical coordinate holding cells a and b; pinned -> 0
  double pair_value(int cell_a, int cell_b) const {
    int v = model_.lookup(cell_a, cell_b);
    return v < 0 ? 0.0 : x_[static_cast<std::size_t>(v)];
  }

 private:
  const LpModel& model_;
  const std::vector<double>& x_;
};

}  // namespace

std::vector<FoundCut> separate(const LpModel& model, const std::vector<double>& point,
                               const SeparationConfig& config) {
  if (point.size() != model.vars.size())
    throw std::invalid_argument("separate: point dimension mismatch");
  const int n = model.n;
  PointView y(model, point);
  std::vector<FoundCut> found;

  if (config.nonneg) {
    for (std::size_t v = 0; v < model.vars.size(); ++v) {
      if (point[v] >= -config.tol) continue;
      auto [p, q] = model.vars[v];
      if (p == q) continue;  // diagonal bound, not a pair-support instance
      auto [i, j] = cell_of(n, p);
      auto [k, l] = cell_of(n, q);
      GenericInequality g = make_nonneg(n, i, j, k, l);
      found.push_back(FoundCut{expand_generic(g), -point[v], generic_key(g)});
    }
  }

  if (config.triple && n >= 3) {
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
                int ckl = cell_index(n, k, l);
                double viol = y.pair_value(cell_index(n, p1, q1), ckl) +
                              y.pair_value(cell_index(n, p2, q2), ckl) +
                              y.pair_value(cell_index(n, p1, q2), ckl) -
                              y.pair_value(ckl, ckl) -
                              y.pair_value(cell_index(n, p1, q1), cell_index(n, p2, q2));
                if (viol <= config.tol) continue;
                GenericInequality g = make_triple(n, p1, q1, p2, q2, k, l);
                found.push_back(FoundCut{expand_generic(g), viol, generic_key(g)});
              }
            }
        }
      }
  }

  if (config.mterm && n >= 6) {
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        int ckl = cell_index(n, k, l);
        std::vector<std::pair<int, int>> pool;
        for (int i = 0; i < n; ++i) {
          if (i == k) continue;
          for (int j = 0; j < n; ++j)
            if (j != l) pool.emplace_back(i, j);
        }
        std::vector<std::pair<int, int>> chosen;
        std::vector<bool> used_row(static_cast<std::size_t>(n), false);
        std::vector<bool> used_col(static_cast<std::size_t>(n), false);
        double viol = -y.pair_value(ckl, ckl);
        // grow while the violation still increases, capped at m = n-3
        while (static_cast<int>(chosen.size()) < n - 3) {
          double best_gain = 0;
          std::ptrdiff_t best = -1;
          for (std::size_t t = 0; t < pool.size(); ++t) {
            auto [i, j] = pool[t];
            if (used_row[static_cast<std::size_t>(i)] || used_col[static_cast<std::size_t>(j)])
              continue;
            int cij = cell_index(n, i, j);
            double gain = y.pair_value(cij, ckl);
            for (auto [i2, j2] : chosen) gain -= y.pair_value(cij, cell_index(n, i2, j2));
            if (gain > best_gain) {
              best_gain = gain;
              best = static_cast<std::ptrdiff_t>(t);
            }
          }
          if (best < 0) break;
          auto [i, j] = pool[static_cast<std::size_t>(best)];
          chosen.emplace_back(i, j);
          used_row[static_cast<std::size_t>(i)] = true;
          used_col[static_cast<std::size_t>(j)] = true;
          viol += best_gain;
        }
        if (static_cast<int>(chosen.size()) >= 3 && viol > config.tol) {
          GenericInequality g = make_mterm(n, chosen, k, l);
          found.push_back(FoundCut{expand_generic(g), viol, generic_key(g)});
        }
      }
  }

  std::sort(found.begin(), found.end(), [](const FoundCut& a, const FoundCut& b) {
    if (a.violation != b.violation) return a.violation > b.violation;
    return a.key < b.key;
  });
  // drop duplicates found through different scans
  std::set<std::string> seen;
  std::vector<FoundCut> out;
  for (auto& f : found) {
    if (!seen.insert(f.key).second) continue;
    out.push_back(std::move(f));
    if (static_cast<int>(out.size()) == config.budget) break;
  }
  return out;
}

BoundReport cutting_plane_bound(const QapInstance& inst, const BoundConfig& config,
                                const std::string& instance_id) {
  LpModel model = build_lp(inst.n, {});
  std::vector<Rational> objective = objective_vector(inst, model);
  std::set<std::string> pool;

  BoundReport report;
  report.instance_id = instance_id;

  for (int round = 0; round <= config.max_rounds; ++round) {
    LpSolution sol = solve_lp(model, objective);
    if (sol.status != LpStatus::optimal)
      throw std::runtime_error("cutting_plane_bound: base relaxation came back " +
                               lp_status_name(sol.status));
    BoundRound entry;
    entry.bound = sol.value;

    std::vector<FoundCut> cuts;
    if (round < config.max_rounds) cuts = separate(model, sol.x, config.sep);
    for (auto& f : cuts) {
      entry.max_violation = std::max(entry.max_violation, f.violation);
      if (!pool.insert(f.key).second) continue;
      model.cuts.push_back(std::move(f.cut));
      ++entry.cuts_added;
    }
    report.rounds.push_back(entry);
    if (entry.cuts_added == 0) break;
  }
  report.final_bound = report.rounds.back().bound;
  report.cut_pool_size = static_cast<long long>(model.cuts.size());

  if (config.brute_force) {
    auto [opt, arg] = brute_force_optimum(inst);
    report.optimum = opt;
    report.argmin = arg;
    double opt_d = opt.get_d();
    report.gap = opt_d - report.final_bound;
    if (report.final_bound > opt_d + 1e-6)
      throw std::logic_error("cutting_plane_bound: bound exceeds the brute-force optimum");
  }
  return report;
}

}  // namespace qap
