#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qap/affine_hull.hpp"
#include "qap/qap_model.hpp"
#include "qap/rng.hpp"

using namespace qap;

namespace {

const char* kTiny = "2\n0 1\n1 0\n0 2\n2 0";

QapInstance random_instance(Rng& rng, int n, long hi = 9) {
  QapInstance inst;
  inst.n = n;
  for (int k = 0; k < n * n; ++k) inst.flows.push_back(make_rational(rng.int_in(0, hi)));
  for (int k = 0; k < n * n; ++k) inst.distances.push_back(make_rational(rng.int_in(0, hi)));
  return inst;
}

// exact value of the objective on a vertex, through the LP variable space
Rational objective_on_vertex(const LpModel& model, const std::vector<Rational>& obj,
                             const Permutation& sigma) {
  Rational acc = 0;
  auto v = vertex(sigma);
  for (std::size_t i = 0; i < model.vars.size(); ++i) {
    auto [p, q] = model.vars[i];
    if (v.has(p, q)) acc += obj[i];
  }
  return acc;
}

}  // namespace

TEST_CASE("instance parsing") {
  QapInstance inst = parse_qaplib(kTiny);
  CHECK(inst.n == 2);
  CHECK(inst.flow(0, 1) == 1);
  CHECK(inst.dist(0, 1) == 2);
  CHECK(inst.dist(1, 0) == 2);

  // round trip
  QapInstance again = parse_qaplib(serialize_qaplib(inst));
  CHECK(again.flows == inst.flows);
  CHECK(again.distances == inst.distances);

  CHECK_THROWS_WITH_AS(parse_qaplib("2\n0 1\n1 0\n0 2\n2"), doctest::Contains("missing"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_qaplib("2\n0 x\n1 0\n0 2\n2 0"), doctest::Contains("line 2"),
                       ParseError);
  CHECK_THROWS_AS(parse_qaplib(""), ParseError);
  CHECK_THROWS_AS(parse_qaplib("2\n0 1\n1 0\n0 2\n2 0\n9"), ParseError);  // trailing token
}

TEST_CASE("permutation cost and brute force") {
  QapInstance inst = parse_qaplib(kTiny);
  CHECK(permutation_cost(inst, Permutation::identity(2)) == 4);
  CHECK(permutation_cost(inst, Permutation({1, 0})) == 4);
  auto [cost, arg] = brute_force_optimum(inst);
  CHECK(cost == 4);
  CHECK(arg == Permutation::identity(2));  // lexicographically first on ties

  QapInstance zero;
  zero.n = 3;
  zero.flows.assign(9, 0);
  zero.distances.assign(9, 0);
  auto [zc, za] = brute_force_optimum(zero);
  CHECK(zc == 0);
  CHECK(za == Permutation::identity(3));
}

TEST_CASE("diagonal linear term shifts every cost uniformly") {
  Rng rng(5);
  QapInstance inst = random_instance(rng, 4);
  QapInstance shifted = inst;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) shifted.linear[{i, j}] = 3;
  for (const auto& p : enumerate_permutations(4))
    CHECK(permutation_cost(shifted, p) == permutation_cost(inst, p) + 12);
  CHECK(brute_force_optimum(shifted).second == brute_force_optimum(inst).second);
}

TEST_CASE("base model: vertices are feasible, zero objective solves to 0") {
  for (int n : {2, 3, 4}) {
    LpModel model = build_lp(n, {});
    // exact feasibility of every vertex on every equality row
    for (const auto& sigma : enumerate_permutations(n)) {
      auto v = vertex(sigma);
      for (std::size_t r = 0; r < model.eq_rows.size(); ++r) {
        Rational acc = 0;
        for (const auto& [var, c] : model.eq_rows[r]) {
          auto [p, q] = model.vars[static_cast<std::size_t>(var)];
          if (v.has(p, q)) acc += c;
        }
        CHECK(acc == model.eq_rhs[r]);
      }
    }
    std::vector<Rational> zero_obj(model.vars.size());
    auto sol = solve_lp(model, zero_obj);
    CHECK(sol.status == LpStatus::optimal);
    CHECK(sol.value == doctest::Approx(0.0));
  }
}

TEST_CASE("objective vector agrees with permutation cost on every vertex") {
  Rng rng(17);
  for (int n : {3, 4, 5}) {
    QapInstance inst = random_instance(rng, n);
    if (n == 3) inst.linear[{0, 1}] = make_rational(5, 2);  // exercise the linear term
    LpModel model = build_lp(n, {});
    auto obj = objective_vector(inst, model);
    for (const auto& sigma : enumerate_permutations(n))
      CHECK(objective_on_vertex(model, obj, sigma) == permutation_cost(inst, sigma));
  }
}

TEST_CASE("LP relaxation bounds the optimum from below") {
  QapInstance inst = parse_qaplib(kTiny);
  LpModel model = build_lp(2, {});
  auto sol = solve_lp(model, objective_vector(inst, model));
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.value <= 4.0 + 1e-9);
}

TEST_CASE("exact simplex matches the float one on small models") {
  Rng rng(23);
  for (int n : {2, 3}) {
    QapInstance inst = random_instance(rng, n, 5);
    LpModel model = build_lp(n, {});
    auto obj = objective_vector(inst, model);
    auto exact = solve_lp_exact(model, obj);
    auto approx = solve_lp(model, obj);
    REQUIRE(exact.status == LpStatus::optimal);
    REQUIRE(approx.status == LpStatus::optimal);
    CHECK(std::abs(exact.value.get_d() - approx.value) < 1e-6);
    CHECK(exact.value <= brute_force_optimum(inst).first);
  }
}

TEST_CASE("exact simplex guard") {
  LpModel model = build_lp(5, {});
  std::vector<Rational> obj(model.vars.size());
  CHECK_THROWS_AS(solve_lp_exact(model, obj), std::invalid_argument);
}

TEST_CASE("separation finds nothing at a vertex") {
  int n = 4;
  LpModel model = build_lp(n, {});
  SeparationConfig cfg;
  for (const auto& sigma : enumerate_permutations(n)) {
    auto v = vertex(sigma);
    std::vector<double> point(model.vars.size(), 0.0);
    for (std::size_t i = 0; i < model.vars.size(); ++i)
      if (v.has(model.vars[i].first, model.vars[i].second)) point[i] = 1.0;
    CHECK(separate(model, point, cfg).empty());
  }
}

TEST_CASE("separation flags a negative coordinate exactly") {
  int n = 4;
  LpModel model = build_lp(n, {});
  std::vector<double> point(model.vars.size(), 0.0);
  // pick an off-diagonal live coordinate
  std::size_t target = 0;
  for (std::size_t i = 0; i < model.vars.size(); ++i)
    if (model.vars[i].first != model.vars[i].second) {
      target = i;
      break;
    }
  point[target] = -0.1;
  SeparationConfig cfg;
  cfg.triple = cfg.mterm = false;
  auto cuts = separate(model, point, cfg);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].violation == doctest::Approx(0.1));
}

TEST_CASE("no family cut separates the barycenter") {
  int n = 6;
  LpModel model = build_lp(n, {});
  std::vector<double> point(model.vars.size());
  for (std::size_t i = 0; i < model.vars.size(); ++i) {
    auto [p, q] = model.vars[i];
    point[i] = p == q ? 1.0 / n : 1.0 / (n * (n - 1.0));
  }
  SeparationConfig cfg;
  CHECK(separate(model, point, cfg).empty());
}

TEST_CASE("cutting-plane bound on the tiny instance") {
  QapInstance inst = parse_qaplib(kTiny);
  BoundConfig cfg;
  cfg.brute_force = true;
  auto report = cutting_plane_bound(inst, cfg, "tiny");
  CHECK(report.final_bound <= 4.0 + 1e-6);
  CHECK(report.final_bound >= report.rounds.front().bound - 1e-9);
  CHECK(*report.optimum == 4);
}

TEST_CASE("cutting-plane bound on the zero instance") {
  QapInstance zero;
  zero.n = 3;
  zero.flows.assign(9, 0);
  zero.distances.assign(9, 0);
  BoundConfig cfg;
  cfg.brute_force = true;
  auto report = cutting_plane_bound(zero, cfg, "zero3");
  CHECK(report.rounds.size() >= 1);
  CHECK(report.final_bound == doctest::Approx(0.0));
  CHECK(*report.optimum == 0);
}

TEST_CASE("cuts close a base-relaxation violation of the 3-cell inequality") {
  for (int n : {5, 6}) {
    LpModel model = build_lp(n, {});
    auto lin = expand_generic(make_triple(n, 0, 0, 1, 1, 2, 2));
    std::vector<Rational> obj(model.vars.size());
    for (const auto& [cell, c] : lin.diag) {
      int p = cell_index(n, cell.first, cell.second);
      int v = model.lookup(p, p);
      if (v >= 0) obj[static_cast<std::size_t>(v)] += c;
    }
    for (const auto& [pq, c] : lin.off) {
      int v = model.lookup(pq.first, pq.second);
      if (v >= 0) obj[static_cast<std::size_t>(v)] += c;
    }
    auto sol = solve_lp(model, obj);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value < -1e-3);  // the base relaxation violates the inequality

    SeparationConfig cfg;
    int rounds = 0;
    auto cuts = separate(model, sol.x, cfg);
    CHECK(!cuts.empty());
    while (!cuts.empty() && rounds < 15) {
      for (auto& f : cuts) model.cuts.push_back(std::move(f.cut));
      sol = solve_lp(model, obj);
      REQUIRE(sol.status == LpStatus::optimal);
      cuts = separate(model, sol.x, cfg);
      ++rounds;
    }
    CHECK(sol.value >= -1e-6);  // the family separates itself out

    // every cut that entered the pool is valid on every vertex, exactly
    for (const auto& cut : model.cuts)
      for (const auto& sigma : enumerate_permutations(n))
        CHECK(evaluate_linear_at_vertex(cut, sigma) >= 0);
  }
}

TEST_CASE("cutting-plane bounds stay sound and monotone on seeded instances") {
  Rng rng(41);
  for (int n : {3, 4}) {
    for (int trial = 0; trial < 5; ++trial) {
      QapInstance inst = random_instance(rng, n);
      BoundConfig cfg;
      cfg.brute_force = true;
      cfg.max_rounds = 8;
      auto report = cutting_plane_bound(inst, cfg);
      double opt = report.optimum->get_d();
      for (std::size_t r = 0; r < report.rounds.size(); ++r) {
        CHECK(report.rounds[r].bound <= opt + 1e-6);
        if (r) CHECK(report.rounds[r].bound >= report.rounds[r - 1].bound - 1e-9);
      }
    }
  }
}
