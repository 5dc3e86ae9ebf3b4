// Command-line surface: every subcommand prints a JSON run report on stdout
// (and to --out when given) with exact integer/rational encodings.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <string>

#include "qap/affine_hull.hpp"
#include "qap/facets.hpp"
#include "qap/insufficiency.hpp"
#include "qap/parallel.hpp"
#include "qap/perm.hpp"
#include "qap/qap_model.hpp"
#include "qap/report.hpp"
#include "qap/rng.hpp"
#include "qap/structure.hpp"

namespace {

using namespace qap;
using Clock = std::chrono::steady_clock;

struct CommandResult {
  json results;
  std::string mode = "exact";
  int exit_code = 0;
};

RankMode parse_mode(const std::string& mode, std::size_t rows) {
  if (mode == "exact") return RankMode::exact;
  if (mode == "modp") return RankMode::modp;
  if (mode == "auto") return default_rank_mode(rows);
  throw CLI::ValidationError("--mode", "expected exact, modp or auto");
}

std::string mode_name(RankMode m) { return m == RankMode::exact ? "exact" : "modp"; }

SigmaConfig random_sigma_config(int n, Rng& rng) {
  SigmaConfig cfg;
  cfg.n = n;
  std::vector<int> img(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) img[static_cast<std::size_t>(i)] = i;
  rng.shuffle(img);
  cfg.base = Permutation(img);
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  rng.shuffle(idx);
  cfg.k1 = idx[0];
  cfg.k2 = idx[1];
  cfg.k3 = idx[2];
  cfg.x = idx[3];
  cfg.y = idx[4];
  return cfg;
}

GenericInequality select_instance(Family fam, int n, long long index, const FamilyOptions& opts) {
  FamilyEnumeration fe = enumerate_family(fam, n, opts);
  if (index < 0 || index >= fe.count)
    throw std::invalid_argument("--index " + std::to_string(index) + " out of range, family has " +
                                std::to_string(fe.count) + " instances");
  return fe.instances[static_cast<std::size_t>(index)];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact toolkit for the second-order Birkhoff (assignment) polytope"};
  app.require_subcommand(1);

  unsigned jobs = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  app.add_option("--jobs", jobs, "worker threads (default: machine parallelism)");
  app.add_option("--seed", seed, "seed for randomized sweeps");
  app.add_option("--out", out_path, "also write the report to this file");

  // --- vertices ---
  auto* cmd_vertices = app.add_subcommand("vertices", "enumerate the polytope vertices");
  int v_n = 3;
  bool v_full = false;
  cmd_vertices->add_option("--n", v_n, "problem size")->required();
  cmd_vertices->add_flag("--full", v_full, "include the canonical one-coordinates per vertex");

  // --- affine-dim ---
  auto* cmd_affine = app.add_subcommand("affine-dim", "affine dimension of the vertex set");
  int a_n = 4;
  std::string a_mode = "auto";
  cmd_affine->add_option("--n", a_n, "problem size")->required();
  cmd_affine->add_option("--mode", a_mode, "exact | modp | auto");

  // --- check-equations ---
  auto* cmd_check = app.add_subcommand("check-equations",
                                       "verify every vertex satisfies the hull equations");
  int c_n = 4;
  cmd_check->add_option("--n", c_n, "problem size")->required();

  // --- gen-family ---
  auto* cmd_gen = app.add_subcommand("gen-family", "enumerate an inequality family");
  std::string g_family;
  int g_n = 6, g_m = 3, g_samples = 20;
  bool g_count_only = false;
  cmd_gen->add_option("--family", g_family, "nonneg | triple | mterm | box")->required();
  cmd_gen->add_option("--n", g_n, "problem size")->required();
  cmd_gen->add_option("--m", g_m, "cell count for the mterm family");
  cmd_gen->add_option("--samples", g_samples, "sample count for the box family");
  cmd_gen->add_flag("--count-only", g_count_only, "emit counts without the instance list");

  // --- certify ---
  auto* cmd_certify = app.add_subcommand("certify", "validity/face/facet certificate");
  int f_n = 6, f_m = 3, f_samples = 20;
  long long f_index = 0;
  std::string f_family, f_ineq_path, f_mode = "modp";
  cmd_certify->add_option("--n", f_n, "problem size")->required();
  cmd_certify->add_option("--family", f_family, "nonneg | triple | mterm | box");
  cmd_certify->add_option("--index", f_index, "instance index within the family enumeration");
  cmd_certify->add_option("--ineq", f_ineq_path, "inequality file (JSON record)");
  cmd_certify->add_option("--m", f_m, "cell count for the mterm family");
  cmd_certify->add_option("--samples", f_samples, "sample count for the box family");
  cmd_certify->add_option("--mode", f_mode, "exact | modp | auto");

  // --- lemma-zero ---
  auto* cmd_zero = app.add_subcommand("lemma-zero", "signed 12-permutation cancellation sweep");
  int z_n = 5, z_trials = 100;
  cmd_zero->add_option("--n", z_n, "problem size (>= 5)")->required();
  cmd_zero->add_option("--trials", z_trials, "number of seeded configurations");

  // --- connectivity ---
  auto* cmd_conn = app.add_subcommand("connectivity", "transposition-graph connectivity");
  std::string s_spec_path;
  cmd_conn->add_option("--spec", s_spec_path, "graph spec file (JSON record)")->required();

  // --- insufficiency ---
  auto* cmd_insuf = app.add_subcommand("insufficiency", "moment-vector dependence evidence");
  int i_n = 6, i_points = 1000;
  cmd_insuf->add_option("--n", i_n, "problem size (<= 6)")->required();
  cmd_insuf->add_option("--points", i_points, "numeric verification points");

  // --- bound ---
  auto* cmd_bound = app.add_subcommand("bound", "cutting-plane lower bound for an instance");
  std::string b_instance, b_cuts = "nonneg,triple,mterm";
  int b_rounds = 20, b_budget = 50;
  bool b_bf = false;
  cmd_bound->add_option("--instance", b_instance, "instance file (plain text)")->required();
  cmd_bound->add_option("--cuts", b_cuts, "comma list from nonneg,triple,mterm");
  cmd_bound->add_option("--rounds", b_rounds, "separation rounds");
  cmd_bound->add_option("--budget", b_budget, "cuts added per round");
  cmd_bound->add_flag("--brute-force", b_bf, "also compute the exact optimum and gap");

  // --- solve-exact ---
  auto* cmd_exact = app.add_subcommand("solve-exact", "rational simplex on the base relaxation");
  std::string e_instance;
  cmd_exact->add_option("--instance", e_instance, "instance file (plain text)")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (jobs > 0) set_default_jobs(jobs);

  json parameters;
  std::string command;
  CommandResult res;
  auto t0 = Clock::now();

  try {
    if (*cmd_vertices) {
      command = "vertices";
      parameters = {{"n", v_n}, {"full", v_full}};
      auto perms = enumerate_permutations(v_n);
      json list = json::array();
      for (const auto& p : perms) {
        json entry;
        entry["perm"] = permutation_json(p);
        if (v_full) {
          json ones = json::array();
          for (auto [pc, qc] : vertex(p).pairs) {
            auto [i, j] = cell_of(v_n, pc);
            auto [k, l] = cell_of(v_n, qc);
            ones.push_back(json::array({i + 1, j + 1, k + 1, l + 1}));
          }
          entry["ones"] = ones;
        }
        list.push_back(std::move(entry));
      }
      res.results = {{"n", v_n}, {"count", perms.size()}, {"vertices", list}};
    } else if (*cmd_affine) {
      command = "affine-dim";
      RankMode mode = parse_mode(a_mode, static_cast<std::size_t>(factorial(a_n)));
      parameters = {{"n", a_n}, {"mode", mode_name(mode)}};
      res.mode = mode_name(mode);
      long long dim = affine_dimension(a_n, mode, ModpOptions{2, seed});
      res.results = {{"n", a_n}, {"vertex_count", factorial(a_n)}, {"affine_dimension", dim}};
      if (a_n >= 4) {
        long long formula = dimension_formula(a_n);
        res.results["formula"] = formula;
        res.results["match"] = dim == formula;
        if (dim != formula) res.exit_code = 1;
      }
    } else if (*cmd_check) {
      command = "check-equations";
      parameters = {{"n", c_n}};
      if (c_n > 6) throw std::invalid_argument("check-equations guarded to n <= 6");
      auto canonical = build_equation_system(c_n, CoordMode::canonical);
      auto full = build_equation_system(c_n, CoordMode::full);
      auto perms = enumerate_permutations(c_n);
      long long violations = 0;
      std::string first;
      for (const auto& p : perms) {
        auto v = vertex(p);
        std::string why;
        if (!satisfies(canonical, v, &why) || !satisfies(full, v, &why)) {
          ++violations;
          if (first.empty()) first = p.to_string() + " violates " + why;
        }
      }
      long long decode_fail = 0;
      if (c_n <= 5) {
        for (const auto& p : perms)
          if (!(decode_01(vertex(p).full_matrix(), c_n) == p)) ++decode_fail;
      }
      res.results = {{"n", c_n},
                     {"vertices", perms.size()},
                     {"canonical_equations", canonical.equations.size()},
                     {"full_equations", full.equations.size()},
                     {"violations", violations},
                     {"decode_roundtrip_failures", c_n <= 5 ? json(decode_fail) : json(nullptr)}};
      if (!first.empty()) res.results["first_violation"] = first;
      if (violations > 0 || decode_fail > 0) res.exit_code = 1;
    } else if (*cmd_gen) {
      command = "gen-family";
      Family fam = family_from_name(g_family);
      FamilyOptions opts;
      opts.m = g_m;
      opts.samples = g_samples;
      opts.seed = seed;
      parameters = {{"family", g_family}, {"n", g_n}, {"count_only", g_count_only}};
      if (fam == Family::mterm) parameters["m"] = g_m;
      if (fam == Family::box_samples) parameters["samples"] = g_samples;
      FamilyEnumeration fe = enumerate_family(fam, g_n, opts);
      res.results = {{"family", g_family}, {"n", g_n}, {"count", fe.count}};
      if (fam == Family::nonneg || fam == Family::mterm)
        res.results["formula_count"] = family_count(fam, g_n, opts);
      if (fam == Family::triple) {
        res.results["enumerated_count"] = fe.count;
        res.results["formula_term_m2"] = family_formula_term(2, g_n);
      }
      if (!g_count_only) {
        json list = json::array();
        for (const auto& g : fe.instances) list.push_back(inequality_json(g, false));
        res.results["instances"] = list;
      }
    } else if (*cmd_certify) {
      command = "certify";
      RankMode mode = parse_mode(f_mode, static_cast<std::size_t>(factorial(f_n)));
      res.mode = mode_name(mode);
      GenericInequality g;
      if (!f_ineq_path.empty()) {
        g = parse_inequality_text(read_text_file(f_ineq_path));
        if (g.n != f_n) throw std::invalid_argument("--n disagrees with the inequality file");
        parameters = {{"n", f_n}, {"ineq", f_ineq_path}, {"mode", mode_name(mode)}};
      } else if (!f_family.empty()) {
        FamilyOptions opts;
        opts.m = f_m;
        opts.samples = f_samples;
        opts.seed = seed;
        g = select_instance(family_from_name(f_family), f_n, f_index, opts);
        parameters = {{"n", f_n},
                      {"family", f_family},
                      {"index", f_index},
                      {"mode", mode_name(mode)}};
      } else {
        throw CLI::ValidationError("certify", "needs --ineq FILE or --family F --index K");
      }
      FacetCertificate cert = certify(expand_generic(g), f_n, mode, ModpOptions{2, seed});
      res.results = {{"inequality", inequality_json(g)}, {"certificate", certificate_json(cert)}};
      if (!cert.valid) res.exit_code = 1;
    } else if (*cmd_zero) {
      command = "lemma-zero";
      parameters = {{"n", z_n}, {"trials", z_trials}};
      Rng rng(seed);
      long long verified = 0;
      json failures = json::array();
      for (int t = 0; t < z_trials; ++t) {
        SigmaConfig cfg = random_sigma_config(z_n, rng);
        auto r = verify_zero_identity(cfg);
        if (r.zero)
          ++verified;
        else
          failures.push_back(permutation_json(cfg.base));
      }
      res.results = {{"n", z_n}, {"trials", z_trials}, {"verified", verified}};
      if (verified != z_trials) {
        res.results["failures"] = failures;
        res.exit_code = 1;
      }
    } else if (*cmd_conn) {
      command = "connectivity";
      TranspositionGraphSpec spec = parse_graph_spec_text(read_text_file(s_spec_path));
      parameters = {{"spec", s_spec_path}};
      PermGraph graph = build_transposition_graph(spec);
      Connectivity conn = is_connected(graph);
      res.results = {{"spec", graph_spec_json(spec)},
                     {"nodes", graph.nodes.size()},
                     {"edges", graph.edge_count},
                     {"connected", conn.connected},
                     {"components", conn.components}};
      if (spec.mode == GraphMode::lemma1) {
        json relabel = json::array();
        for (int v : graph.value_relabel) relabel.push_back(v + 1);
        res.results["value_relabel"] = relabel;
      }
      // the lemma modes promise connectivity; a miss is a verification failure
      if (spec.mode != GraphMode::plain && !conn.connected) res.exit_code = 1;
    } else if (*cmd_insuf) {
      command = "insufficiency";
      parameters = {{"n", i_n}, {"points", i_points}};
      if (i_n < 2 || i_n > 6) throw std::invalid_argument("insufficiency guarded to 2 <= n <= 6");
      MonomialBasis basis = make_basis(i_n);
      DenseMatrix m = moment_matrix(i_n, basis);
      RankMode mode = default_rank_mode(m.rows);
      res.mode = mode_name(mode);
      long long r = static_cast<long long>(rank(m, mode, ModpOptions{2, seed}));
      res.results = {{"n", i_n},
                     {"basis_size", basis.size},
                     {"span_bound", span_dimension_bound(i_n)},
                     {"moment_rank", r},
                     {"rank_mode", mode_name(mode)},
                     {"rank_below_factorial", r < factorial(i_n)}};
      if (i_n == 6) {
        DependenceCertificate cert = dependence_certificate(i_n, seed, i_points);
        res.results["certificate"] = dependence_certificate_json(cert);
        if (!cert.residual_checked || !cert.mixed_signs || cert.support.size() < 3)
          res.exit_code = 1;
      }
      SssReport sss = check_sss_equivalence(i_n, ModpOptions{2, seed});
      res.results["sss"] = {{"rank_moment", sss.rank_moment},
                            {"rank_square", sss.rank_square},
                            {"rank_joint", sss.rank_joint},
                            {"equal", sss.equal},
                            {"spot_checked", sss.spot_checked}};
      if (!sss.equal || !sss.spot_checked) res.exit_code = 1;
    } else if (*cmd_bound) {
      command = "bound";
      QapInstance inst = parse_qaplib(read_text_file(b_instance));
      BoundConfig cfg;
      cfg.max_rounds = b_rounds;
      cfg.sep.budget = b_budget;
      cfg.sep.nonneg = b_cuts.find("nonneg") != std::string::npos;
      cfg.sep.triple = b_cuts.find("triple") != std::string::npos;
      cfg.sep.mterm = b_cuts.find("mterm") != std::string::npos;
      cfg.brute_force = b_bf;
      parameters = {{"instance", b_instance},
                    {"cuts", b_cuts},
                    {"rounds", b_rounds},
                    {"budget", b_budget},
                    {"brute_force", b_bf}};
      res.mode = "float";
      if (inst.n > 6) throw std::invalid_argument("bound guarded to n <= 6");
      BoundReport report = cutting_plane_bound(inst, cfg, b_instance);
      res.results = bound_report_json(report);
    } else if (*cmd_exact) {
      command = "solve-exact";
      QapInstance inst = parse_qaplib(read_text_file(e_instance));
      parameters = {{"instance", e_instance}};
      LpModel model = build_lp(inst.n, {});
      auto objective = objective_vector(inst, model);
      ExactLpSolution sol = solve_lp_exact(model, objective);
      res.results = {{"n", inst.n},
                     {"status", lp_status_name(sol.status)},
                     {"variables", model.vars.size()},
                     {"equalities", model.eq_rows.size()}};
      if (sol.status == LpStatus::optimal) {
        res.results["value"] = rational_json(sol.value);
        json nz = json::array();
        for (std::size_t v = 0; v < sol.x.size(); ++v) {
          if (sol.x[v] == 0) continue;
          auto [p, q] = model.vars[v];
          auto [i, j] = cell_of(inst.n, p);
          auto [k, l] = cell_of(inst.n, q);
          nz.push_back(json::array({i + 1, j + 1, k + 1, l + 1, rational_json(sol.x[v])}));
        }
        res.results["nonzeros"] = nz;
      } else {
        res.exit_code = 1;
      }
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  double elapsed =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  json report = make_run_report(command, parameters, res.mode, seed, res.results, elapsed);
  std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) write_text_file(out_path, text);
  return res.exit_code;
}
