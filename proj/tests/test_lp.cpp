#include <random>

#include "catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "zeroext/lp.hpp"
#include "zeroext/solvers.hpp"

using namespace zeroext;
using namespace fixtures;

TEST_CASE("simplex solves tiny programs") {
  {
    // min x subject to x >= 3
    LinearProgram lp;
    int x = lp.add_var(Rat(1));
    LinearProgram::Row row;
    row.coef = {Rat(1)};
    row.rel = Rel::GE;
    row.rhs = Rat(3);
    lp.rows.push_back(row);
    LpSolution sol = solve_lp(lp);
    CHECK(sol.value == Rat(3));
    CHECK(sol.x[x] == Rat(3));
  }
  {
    // min x + y subject to x + y >= 1
    LinearProgram lp;
    lp.add_var(Rat(1));
    lp.add_var(Rat(1));
    LinearProgram::Row row;
    row.coef = {Rat(1), Rat(1)};
    row.rel = Rel::GE;
    row.rhs = Rat(1);
    lp.rows.push_back(row);
    CHECK(solve_lp(lp).value == Rat(1));
  }
  {
    // Equality rows and fractional optimum: min x + 2y with x + y = 1, x <= 1/3.
    LinearProgram lp;
    lp.add_var(Rat(1));
    lp.add_var(Rat(2));
    LinearProgram::Row eq;
    eq.coef = {Rat(1), Rat(1)};
    eq.rel = Rel::EQ;
    eq.rhs = Rat(1);
    lp.rows.push_back(eq);
    LinearProgram::Row le;
    le.coef = {Rat(1), Rat(0)};
    le.rel = Rel::LE;
    le.rhs = Rat(1, 3);
    lp.rows.push_back(le);
    LpSolution sol = solve_lp(lp);
    CHECK(sol.value == Rat(1, 3) + Rat(2) * Rat(2, 3));
    CHECK(sol.x[0] == Rat(1, 3));
  }
  {
    // Infeasible: x >= 1 and x <= 0.
    LinearProgram lp;
    lp.add_var(Rat(1));
    LinearProgram::Row ge;
    ge.coef = {Rat(1)};
    ge.rel = Rel::GE;
    ge.rhs = Rat(1);
    LinearProgram::Row le;
    le.coef = {Rat(1)};
    le.rel = Rel::LE;
    le.rhs = Rat(0);
    lp.rows = {ge, le};
    CHECK_THROWS_AS(solve_lp(lp), Error);
  }
  {
    // Unbounded: min -x with no upper bound.
    LinearProgram lp;
    lp.add_var(Rat(-1));
    CHECK_THROWS_AS(solve_lp(lp), Error);
  }
}

TEST_CASE("relaxation with no free points is a constant") {
  Instance inst;
  inst.mu = metric_of(path_graph(3));
  inst.points = inst.mu.points();
  inst.add_cost("p0", "p2", Rat(3));
  ExtensionRelaxation rel = extension_lp(inst);
  CHECK(rel.tau_star == Rat(6));
  CHECK(rel.lp.num_vars == 0);
}

TEST_CASE("relaxation of the triangle star is half-integral") {
  Instance inst = k3_star();
  ExtensionRelaxation rel = extension_lp(inst);
  CHECK(rel.tau_star == Rat(3, 2));
  // The optimal extension puts the free point midway to every terminal.
  for (const std::string& t : inst.terminals()) CHECK(rel.m_star.at("x", t) == Rat(1, 2));
  // The best assignment costs 2, so the relaxation is strictly below.
  auto [tau, z] = brute_force(inst);
  CHECK(tau == Rat(2));
  CHECK(rel.tau_star < tau);
}

TEST_CASE("relaxation never exceeds the assignment optimum") {
  std::mt19937 rng(7);
  for (int round = 0; round < 12; ++round) {
    FiniteMetric mu = round % 2 ? metric_of(complete_graph(3)) : metric_of(cycle_graph(5));
    Instance inst = random_instance(mu, 2, 3, rng);
    CHECK(extension_lp(inst).tau_star <= brute_force(inst).first);
  }
}

TEST_CASE("self-reduction matches the oracle on frame metrics") {
  std::mt19937 rng(11);
  for (int round = 0; round < 15; ++round) {
    FiniteMetric mu = round % 2 ? metric_of(complete_bipartite(2, 3))
                                : rectangle_metric(Rat(1), Rat(2));
    Instance inst = random_instance(mu, 2, 4, rng);
    ZeroExtension z = solve_minimizable(inst);
    validate_zero_extension(inst, z);
    CHECK(zero_extension_cost(inst, z) == brute_force(inst).first);
  }
}

TEST_CASE("self-reduction with no free points is the identity") {
  Instance inst;
  inst.mu = metric_of(cycle_graph(4));
  inst.points = inst.mu.points();
  inst.add_cost("c0", "c2", Rat(1));
  ZeroExtension z = solve_minimizable(inst);
  for (const std::string& t : inst.terminals()) CHECK(z.at(t) == t);
}

TEST_CASE("self-reduction rejects non-frame metrics") {
  Instance inst = k3_star();
  try {
    solve_minimizable(inst);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == "NotMinimizable");
  }
  // The 3-cube is modular but its graph is not a frame.
  std::mt19937 rng(3);
  Instance q = random_instance(metric_of(hypercube3()), 1, 2, rng);
  CHECK_THROWS_AS(solve_minimizable(q), Error);
}

TEST_CASE("self-reduction is deterministic") {
  std::mt19937 rng(5);
  Instance inst = random_instance(metric_of(complete_bipartite(2, 3)), 3, 3, rng);
  ZeroExtension a = solve_minimizable(inst);
  ZeroExtension b = solve_minimizable(inst);
  CHECK(a.assign == b.assign);
}
