#include "qap/report.hpp"

#include <fstream>
#include <sstream>

namespace qap {

json rational_json(const Rational& r) { return rational_to_string(r); }

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return to_rational(j.get<long long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ParseError("expected an integer or a rational string, got " + j.dump());
}

json permutation_json(const Permutation& p) {
  json a = json::array();
  for (int i = 0; i < p.n(); ++i) a.push_back(p(i) + 1);
  return a;
}

Permutation permutation_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("permutation must be a nonempty array");
  std::vector<int> img;
  for (const auto& v : j) img.push_back(v.get<int>() - 1);
  Permutation p(std::move(img));
  if (!p.is_valid()) throw ParseError("not a permutation: " + j.dump());
  return p;
}

json inequality_json(const GenericInequality& g, bool include_linear) {
  json j;
  j["n"] = g.n;
  j["beta"] = g.beta;
  json coeffs = json::array();
  for (const auto& [cell, v] : g.coeffs) {
    if (v == 0) continue;
    coeffs.push_back(json::array({cell.first + 1, cell.second + 1, v}));
  }
  j["coeffs"] = coeffs;
  if (include_linear) j["linear"] = linear_inequality_json(expand_generic(g));
  return j;
}

GenericInequality inequality_from_json(const json& j) {
  GenericInequality g;
  g.n = j.at("n").get<int>();
  if (g.n < 1) throw ParseError("inequality: bad n");
  g.beta = j.at("beta").get<long long>();
  for (const auto& entry : j.at("coeffs")) {
    if (!entry.is_array() || entry.size() != 3)
      throw ParseError("inequality: coeffs entries must be [i, j, value]");
    int i = entry[0].get<int>() - 1;
    int cj = entry[1].get<int>() - 1;
    long long v = entry[2].get<long long>();
    if (i < 0 || cj < 0 || i >= g.n || cj >= g.n)
      throw ParseError("inequality: cell out of range in coeffs");
    if (v != 0) g.coeffs[{i, cj}] += v;
  }
  if (g.coeffs.empty()) throw ParseError("inequality: no nonzero coefficients");
  return g;
}

json linear_inequality_json(const LinearInequality& ineq) {
  json j;
  json diag = json::array();
  for (const auto& [cell, c] : ineq.diag)
    diag.push_back(json::array({cell.first + 1, cell.second + 1, rational_json(c)}));
  json off = json::array();
  for (const auto& [pq, c] : ineq.off) {
    auto [i, jj] = cell_of(ineq.n, pq.first);
    auto [k, l] = cell_of(ineq.n, pq.second);
    off.push_back(json::array({i + 1, jj + 1, k + 1, l + 1, rational_json(c)}));
  }
  j["diag"] = diag;
  j["off"] = off;
  j["constant"] = rational_json(ineq.constant);
  return j;
}

LinearInequality linear_inequality_from_json(const json& j, int n) {
  LinearInequality out;
  out.n = n;
  for (const auto& entry : j.at("diag")) {
    int i = entry[0].get<int>() - 1, jj = entry[1].get<int>() - 1;
    out.diag[{i, jj}] = rational_from_json(entry[2]);
  }
  for (const auto& entry : j.at("off")) {
    int i = entry[0].get<int>() - 1, jj = entry[1].get<int>() - 1;
    int k = entry[2].get<int>() - 1, l = entry[3].get<int>() - 1;
    int p = cell_index(n, i, jj), q = cell_index(n, k, l);
    if (p == q) throw ParseError("linear inequality: off entry on the diagonal");
    out.off[{std::min(p, q), std::max(p, q)}] = rational_from_json(entry[4]);
  }
  out.constant = rational_from_json(j.at("constant"));
  return out;
}

GenericInequality parse_inequality_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("inequality file: ") + e.what());
  }
  GenericInequality g = inequality_from_json(j);
  if (j.contains("linear")) {
    LinearInequality given = linear_inequality_from_json(j["linear"], g.n);
    LinearInequality expanded = expand_generic(g);
    if (given.diag != expanded.diag || given.off != expanded.off ||
        given.constant != expanded.constant)
      throw ParseError("inequality file: pre-expanded linear form disagrees with the coefficients");
  }
  return g;
}

json graph_spec_json(const TranspositionGraphSpec& spec) {
  json j;
  j["n"] = spec.n;
  j["mode"] = spec.mode == GraphMode::lemma1   ? "lemma1"
              : spec.mode == GraphMode::lemma2 ? "lemma2"
                                               : "union";
  json groups = json::array();
  for (const auto& g : spec.groups) {
    json jg;
    json fixed = json::array();
    for (auto [pos, img] : g.fixed) fixed.push_back(json::array({pos + 1, img + 1}));
    json forbidden = json::array();
    for (const auto& [pos, bad] : g.forbidden) {
      json vals = json::array();
      for (int v : bad) vals.push_back(v + 1);
      forbidden.push_back(json::array({pos + 1, vals}));
    }
    jg["fixed"] = fixed;
    jg["forbidden"] = forbidden;
    groups.push_back(jg);
  }
  j["groups"] = groups;
  return j;
}

TranspositionGraphSpec parse_graph_spec_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("graph spec file: ") + e.what());
  }
  TranspositionGraphSpec spec;
  spec.n = j.at("n").get<int>();
  std::string mode = j.value("mode", "union");
  if (mode == "lemma1")
    spec.mode = GraphMode::lemma1;
  else if (mode == "lemma2")
    spec.mode = GraphMode::lemma2;
  else if (mode == "union" || mode == "plain")
    spec.mode = GraphMode::plain;
  else
    throw ParseError("graph spec: unknown mode '" + mode + "'");
  for (const auto& jg : j.at("groups")) {
    ConstraintGroup g;
    for (const auto& f : jg.value("fixed", json::array()))
      g.fixed.emplace_back(f[0].get<int>() - 1, f[1].get<int>() - 1);
    for (const auto& f : jg.value("forbidden", json::array())) {
      std::vector<int> bad;
      for (const auto& v : f[1]) bad.push_back(v.get<int>() - 1);
      g.forbidden.emplace_back(f[0].get<int>() - 1, std::move(bad));
    }
    spec.groups.push_back(std::move(g));
  }
  if (spec.groups.empty()) throw ParseError("graph spec: no constraint groups");
  return spec;
}

json certificate_json(const FacetCertificate& cert) {
  json j;
  j["n"] = cert.n;
  j["valid"] = cert.valid;
  j["tight_count"] = cert.tight_count;
  j["tight_affine_dim"] = cert.tight_affine_dim;
  j["polytope_dim"] = cert.polytope_dim;
  j["verdict"] = verdict_name(cert.verdict);
  j["degenerate"] = cert.degenerate;
  j["mode"] = cert.mode == RankMode::exact ? "exact" : "modp";
  return j;
}

json dependence_certificate_json(const DependenceCertificate& cert) {
  json j;
  j["n"] = cert.n;
  j["support_size"] = cert.support.size();
  json support = json::array();
  for (std::size_t s = 0; s < cert.support.size(); ++s) {
    json entry;
    entry["perm"] = permutation_json(cert.support[s]);
    entry["alpha"] = rational_json(cert.alpha[s]);
    support.push_back(entry);
  }
  j["support"] = support;
  j["mixed_signs"] = cert.mixed_signs;
  j["residual_checked"] = cert.residual_checked;
  j["points_checked"] = cert.points_checked;
  return j;
}

json bound_report_json(const BoundReport& report) {
  json j;
  if (!report.instance_id.empty()) j["instance"] = report.instance_id;
  json rounds = json::array();
  for (std::size_t r = 0; r < report.rounds.size(); ++r) {
    json entry;
    entry["round"] = r;
    entry["bound"] = report.rounds[r].bound;
    entry["cuts_added"] = report.rounds[r].cuts_added;
    entry["max_violation"] = report.rounds[r].max_violation;
    rounds.push_back(entry);
  }
  j["rounds"] = rounds;
  j["final_bound"] = report.final_bound;
  j["cut_pool_size"] = report.cut_pool_size;
  if (report.optimum) {
    j["brute_force_optimum"] = rational_json(*report.optimum);
    j["brute_force_argmin"] = permutation_json(*report.argmin);
    j["gap"] = *report.gap;
  }
  return j;
}

json make_run_report(const std::string& command, json parameters, const std::string& mode,
                     std::uint64_t seed, json results, double elapsed_ms) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = command;
  j["parameters"] = std::move(parameters);
  j["mode"] = mode;
  j["seed"] = seed;
  j["results"] = std::move(results);
  j["timings"] = {{"total_ms", elapsed_ms}};
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace qap
