#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lp_oracle.hpp"

#include "coldchain/milp.hpp"
#include "coldchain/solver.hpp"

using namespace coldchain;

TEST_CASE("lp: hand-checked two-variable model with duality") {
  MilpModel m;
  VarId x = m.add_variable("x", 0.0, kInf);
  VarId y = m.add_variable("y", 0.0, kInf);
  m.add_objective_term(x, -1.0);
  m.add_objective_term(y, -1.0);
  m.add_constraint("sum", {{x, 1.0}, {y, 1.0}}, RowSense::LessEqual, 4.0);
  m.add_constraint("xcap", {{x, 1.0}}, RowSense::LessEqual, 3.0);
  Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-4.0));
  CHECK(s.bound == doctest::Approx(-4.0));  // dual objective matches
  CHECK(s.values[x] + s.values[y] == doctest::Approx(4.0));
}

TEST_CASE("lp: equality and >= rows with an objective constant") {
  MilpModel m;
  VarId x = m.add_variable("x", 0.0, kInf);
  VarId y = m.add_variable("y", 0.0, kInf);
  m.add_objective_term(x, 2.0);
  m.add_objective_term(y, 3.0);
  m.set_objective_constant(5.0);
  m.add_constraint("eq", {{x, 1.0}, {y, 1.0}}, RowSense::Equal, 10.0);
  m.add_constraint("floor", {{y, 1.0}}, RowSense::GreaterEqual, 2.0);
  Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  // Put as much as possible on the cheaper x: x = 8, y = 2.
  CHECK(s.objective == doctest::Approx(5.0 + 16.0 + 6.0));
  CHECK(s.values[x] == doctest::Approx(8.0));
  CHECK(s.values[y] == doctest::Approx(2.0));
}

TEST_CASE("lp: variable bounds act without explicit rows") {
  MilpModel m;
  VarId x = m.add_variable("x", 1.5, 2.5);
  VarId f = m.add_variable("f", -kInf, kInf);
  m.add_objective_term(x, 1.0);
  m.add_objective_term(f, 1.0);
  m.add_constraint("link", {{f, 1.0}, {x, -1.0}}, RowSense::GreaterEqual, -1.0);
  Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[x] == doctest::Approx(1.5));
  CHECK(s.values[f] == doctest::Approx(0.5));  // f >= x - 1
  CHECK(s.objective == doctest::Approx(2.0));
}

TEST_CASE("lp: infeasible and unbounded detection") {
  SUBCASE("conflicting rows") {
    MilpModel m;
    VarId x = m.add_variable("x", 0.0, kInf);
    m.add_constraint("hi", {{x, 1.0}}, RowSense::GreaterEqual, 5.0);
    m.add_constraint("lo", {{x, 1.0}}, RowSense::LessEqual, 3.0);
    CHECK(solve_lp(m).status == SolveStatus::Infeasible);
  }
  SUBCASE("conflicting bounds") {
    MilpModel m;
    VarId x = m.add_variable("x", 0.0, 4.0);
    m.add_constraint("hi", {{x, 1.0}}, RowSense::GreaterEqual, 5.0);
    CHECK(solve_lp(m).status == SolveStatus::Infeasible);
  }
  SUBCASE("unbounded ray") {
    MilpModel m;
    VarId x = m.add_variable("x", 0.0, kInf);
    VarId y = m.add_variable("y", 0.0, kInf);
    m.add_objective_term(x, -1.0);
    m.add_constraint("r", {{x, 1.0}, {y, -1.0}}, RowSense::LessEqual, 1.0);
    CHECK(solve_lp(m).status == SolveStatus::Unbounded);
  }
}

TEST_CASE("lp: classic cycling-prone model terminates") {
  // Beale's example; Dantzig pricing cycles without an anti-cycling rule.
  MilpModel m;
  VarId x1 = m.add_variable("x1", 0.0, kInf);
  VarId x2 = m.add_variable("x2", 0.0, kInf);
  VarId x3 = m.add_variable("x3", 0.0, kInf);
  VarId x4 = m.add_variable("x4", 0.0, kInf);
  m.add_objective_term(x1, -0.75);
  m.add_objective_term(x2, 150.0);
  m.add_objective_term(x3, -0.02);
  m.add_objective_term(x4, 6.0);
  m.add_constraint("r1", {{x1, 0.25}, {x2, -60.0}, {x3, -1.0 / 25.0}, {x4, 9.0}},
                   RowSense::LessEqual, 0.0);
  m.add_constraint("r2", {{x1, 0.5}, {x2, -90.0}, {x3, -1.0 / 50.0}, {x4, 3.0}},
                   RowSense::LessEqual, 0.0);
  m.add_constraint("r3", {{x3, 1.0}}, RowSense::LessEqual, 1.0);
  Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-0.05));
}

TEST_CASE("lp: random models match the independent tableau oracle") {
  std::mt19937 rng(20240811);
  int optimal_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 12);
    const int mrows = 2 + static_cast<int>(rng() % 10);
    auto coef = [&](double lo, double hi) {
      return lo + (hi - lo) * std::generate_canonical<double, 32>(rng);
    };
    std::vector<double> c(n), b(mrows);
    std::vector<std::vector<double>> a(mrows, std::vector<double>(n, 0.0));
    MilpModel m;
    for (int j = 0; j < n; ++j) {
      c[j] = coef(-5.0, 5.0);
      VarId id = m.add_variable("x" + std::to_string(j), 0.0, kInf);
      m.add_objective_term(id, c[j]);
    }
    for (int i = 0; i < mrows; ++i) {
      b[i] = coef(1.0, 10.0);
      std::vector<LinTerm> terms;
      for (int j = 0; j < n; ++j) {
        if (rng() % 3 == 0) continue;  // keep some sparsity
        a[i][j] = coef(-2.0, 3.0);
        terms.push_back({j, a[i][j]});
      }
      m.add_constraint("r" + std::to_string(i), std::move(terms),
                       RowSense::LessEqual, b[i]);
    }
    lp_oracle::Result expect = lp_oracle::solve(c, a, b);
    Solution got = solve_lp(m);
    INFO("trial " << trial);
    if (expect.status == lp_oracle::Status::Unbounded) {
      CHECK(got.status == SolveStatus::Unbounded);
    } else {
      REQUIRE(got.status == SolveStatus::Optimal);
      CHECK(got.objective ==
            doctest::Approx(expect.objective).epsilon(1e-6));
      CHECK(got.bound == doctest::Approx(got.objective).epsilon(1e-6));
      CHECK(check_solution(m, got, 1e-6).eval.feasible());
      ++optimal_seen;
    }
  }
  CHECK(optimal_seen > 10);  // the generator must exercise the optimal path
}

namespace {

// Exhaustive knapsack optimum computed without any LP machinery.
double knapsack_best(const std::vector<double>& value,
                     const std::vector<double>& weight, double cap) {
  const int n = static_cast<int>(value.size());
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double v = 0.0, w = 0.0;
    for (int j = 0; j < n; ++j) {
      if (mask >> j & 1) {
        v += value[j];
        w += weight[j];
      }
    }
    if (w <= cap) best = std::max(best, v);
  }
  return best;
}

}  // namespace

TEST_CASE("milp: knapsacks match exhaustive enumeration") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 6 + static_cast<int>(rng() % 7);
    std::vector<double> value(n), weight(n);
    double total_w = 0.0;
    for (int j = 0; j < n; ++j) {
      value[j] = 1.0 + static_cast<double>(rng() % 100);
      weight[j] = 1.0 + static_cast<double>(rng() % 50);
      total_w += weight[j];
    }
    double cap = 0.4 * total_w;
    MilpModel m;
    std::vector<LinTerm> row;
    for (int j = 0; j < n; ++j) {
      VarId id = m.add_variable("b" + std::to_string(j), 0.0, 1.0,
                                VarKind::Binary);
      m.add_objective_term(id, -value[j]);
      row.push_back({id, weight[j]});
    }
    m.add_constraint("cap", std::move(row), RowSense::LessEqual, cap);
    Solution s = solve_milp(m);
    INFO("trial " << trial);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(-s.objective ==
          doctest::Approx(knapsack_best(value, weight, cap)).epsilon(1e-9));
    ValidationReport rep = check_solution(m, s, 1e-6);
    CHECK(rep.eval.feasible());
  }
}

namespace {

MilpModel random_mixed_milp(std::mt19937& rng) {
  const int nb = 3 + static_cast<int>(rng() % 6);
  const int nc = 2 + static_cast<int>(rng() % 5);
  const int mrows = 3 + static_cast<int>(rng() % 6);
  auto coef = [&](double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 32>(rng);
  };
  MilpModel m;
  for (int j = 0; j < nb; ++j) {
    VarId id =
        m.add_variable("b" + std::to_string(j), 0.0, 1.0, VarKind::Binary);
    m.add_objective_term(id, coef(-10.0, 10.0));
  }
  for (int j = 0; j < nc; ++j) {
    VarId id = m.add_variable("x" + std::to_string(j), 0.0, coef(1.0, 5.0));
    m.add_objective_term(id, coef(-3.0, 3.0));
  }
  for (int i = 0; i < mrows; ++i) {
    std::vector<LinTerm> terms;
    for (int j = 0; j < nb + nc; ++j) {
      if (rng() % 2 == 0) continue;
      terms.push_back({j, coef(-2.0, 3.0)});
    }
    if (terms.empty()) terms.push_back({0, 1.0});
    m.add_constraint("r" + std::to_string(i), std::move(terms),
                     RowSense::LessEqual, coef(0.5, 8.0));
  }
  return m;
}

}  // namespace

TEST_CASE("milp: branch and bound agrees with the brute-force oracle") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    MilpModel m = random_mixed_milp(rng);
    Solution bb = solve_milp(m);
    Solution bf = brute_force_binaries(m);
    INFO("trial " << trial);
    CHECK(bb.status == bf.status);
    if (bb.status == SolveStatus::Optimal) {
      CHECK(bb.objective ==
            doctest::Approx(bf.objective)
                .epsilon(1e-6));
      CHECK(check_solution(m, bb, 1e-6).eval.feasible());
    }
  }
}

TEST_CASE("milp: depth-first and first-index options reach the same optimum") {
  std::mt19937 rng(5);
  MilpModel m = random_mixed_milp(rng);
  Solution a = solve_milp(m);
  SolveOptions alt;
  alt.node_order = NodeOrder::DepthFirst;
  alt.branch_rule = BranchRule::FirstIndex;
  Solution b = solve_milp(m, alt);
  REQUIRE(a.status == SolveStatus::Optimal);
  REQUIRE(b.status == SolveStatus::Optimal);
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
}

TEST_CASE("milp: repeated solves are bit-identical") {
  std::mt19937 rng(31);
  MilpModel m = random_mixed_milp(rng);
  Solution a = solve_milp(m);
  Solution b = solve_milp(m);
  CHECK(a.status == b.status);
  CHECK(a.nodes == b.nodes);
  CHECK(a.objective == b.objective);  // exact, not approximate
  CHECK(a.values == b.values);
}

TEST_CASE("milp: limits produce gap or limit statuses") {
  std::mt19937 rng(13);
  MilpModel m = random_mixed_milp(rng);
  SolveOptions opts;
  opts.node_limit = 1;
  Solution s = solve_milp(m, opts);
  CHECK((s.status == SolveStatus::FeasibleGap ||
         s.status == SolveStatus::LimitHit ||
         s.status == SolveStatus::Optimal));
  if (s.status == SolveStatus::FeasibleGap) {
    CHECK(s.gap > 0.0);
    CHECK(s.bound <= s.objective + 1e-9);
  }
}

TEST_CASE("milp: infeasible integer model reported") {
  MilpModel m;
  VarId a = m.add_variable("a", 0.0, 1.0, VarKind::Binary);
  VarId b = m.add_variable("b", 0.0, 1.0, VarKind::Binary);
  m.add_constraint("sum_hi", {{a, 1.0}, {b, 1.0}}, RowSense::GreaterEqual, 2.0);
  m.add_constraint("sum_lo", {{a, 1.0}, {b, 1.0}}, RowSense::LessEqual, 1.0);
  CHECK(solve_milp(m).status == SolveStatus::Infeasible);
  CHECK(brute_force_binaries(m).status == SolveStatus::Infeasible);
}

TEST_CASE("milp: node log lines carry the documented fields") {
  MilpModel m;
  std::vector<LinTerm> row;
  for (int j = 0; j < 6; ++j) {
    VarId id =
        m.add_variable("b" + std::to_string(j), 0.0, 1.0, VarKind::Binary);
    m.add_objective_term(id, -(j + 1.0));
    row.push_back({id, j + 2.0});
  }
  m.add_constraint("cap", std::move(row), RowSense::LessEqual, 11.0);
  std::ostringstream log;
  SolveOptions opts;
  opts.log = &log;
  Solution s = solve_milp(m, opts);
  REQUIRE(s.status == SolveStatus::Optimal);
  const std::string text = log.str();
  CHECK(text.find("node=") != std::string::npos);
  CHECK(text.find("depth=") != std::string::npos);
  CHECK(text.find("bound=") != std::string::npos);
  CHECK(text.find("incumbent=") != std::string::npos);
  CHECK(text.find("gap=") != std::string::npos);
}

TEST_CASE("brute force refuses oversized models") {
  MilpModel m;
  for (int j = 0; j < 21; ++j) {
    m.add_variable("b" + std::to_string(j), 0.0, 1.0, VarKind::Binary);
  }
  CHECK_THROWS_AS(brute_force_binaries(m), std::invalid_argument);
}
