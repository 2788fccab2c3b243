#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "doctest.h"

#include "coldchain/robust.hpp"
#include "coldchain/solver.hpp"

using namespace coldchain;

namespace {

Dimensions tiny_shape() {
  Dimensions d;
  d.suppliers = 3;
  d.dcs = 1;
  d.vcs = 2;
  d.vaccines = 1;
  d.age_groups = 2;
  d.periods = 3;
  return d;
}

}  // namespace

TEST_CASE("rhs protection scales with the uncertainty budget") {
  // max x s.t. x <= 10 where the rhs can drop by 2. With one uncertain
  // parameter the protection is gamma * 2.
  auto solve_with_gamma = [](double gamma) {
    MilpModel m;
    VarId x = m.add_variable("x", 0.0, kInf);
    RowId cap = m.add_constraint("cap", {{x, 1.0}}, RowSense::LessEqual, 10.0);
    m.add_objective_term(x, -1.0);
    UncertainRowSpec spec;
    spec.row = cap;
    spec.gamma = gamma;
    spec.rhs_uncertain = true;
    spec.rhs_deviation = 2.0;
    RobustRowVars rv = robustify_row(m, spec);
    CHECK(rv.z >= 0);
    CHECK(rv.rhs_aux >= 0);
    CHECK(rv.p.size() == 1);
    Solution s = solve_lp(m);
    REQUIRE(s.status == SolveStatus::Optimal);
    return s.values[x];
  };
  CHECK(solve_with_gamma(1.0) == doctest::Approx(8.0));
  CHECK(solve_with_gamma(0.5) == doctest::Approx(9.0));
  CHECK(solve_with_gamma(0.0) == doctest::Approx(10.0));
}

TEST_CASE("coefficient protection recovers the worst-case row") {
  // max x s.t. a*x <= 10 with a in [1, 3]. At full protection the binding
  // row is 3x <= 10.
  MilpModel m;
  VarId x = m.add_variable("x", 0.0, kInf);
  RowId cap = m.add_constraint("cap", {{x, 1.0}}, RowSense::LessEqual, 10.0);
  m.add_objective_term(x, -1.0);
  UncertainRowSpec spec;
  spec.row = cap;
  spec.entries = {{x, 1.0, 2.0}};
  spec.gamma = 1.0;
  RobustRowVars rv = robustify_row(m, spec);
  // x already has lower bound 0, so it serves as its own |x| proxy.
  REQUIRE(rv.abs.size() == 1);
  CHECK(rv.abs[0] == x);
  Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[x] == doctest::Approx(10.0 / 3.0));
}

TEST_CASE("free variables get a dedicated magnitude proxy") {
  // min y s.t. -x + y >= 0, x free in [-5, 5] with uncertain coefficient.
  MilpModel m;
  VarId x = m.add_variable("x", -5.0, 5.0);
  VarId y = m.add_variable("y", 0.0, kInf);
  RowId r =
      m.add_constraint("r", {{x, -1.0}, {y, 1.0}}, RowSense::GreaterEqual, 0.0);
  m.add_objective_term(y, 1.0);
  UncertainRowSpec spec;
  spec.row = r;
  spec.entries = {{x, -1.0, 0.5}};
  spec.gamma = 1.0;
  RobustRowVars rv = robustify_row(m, spec);
  REQUIRE(rv.abs.size() == 1);
  CHECK(rv.abs[0] != x);  // fresh proxy because lower(x) < 0
  CHECK(m.var(rv.abs[0]).lower == 0.0);
  Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  // Worst case: x at its lower bound -5 with coefficient -1.5 forces y >= 7.5?
  // No: protection is against coefficient, optimum keeps x = -5 costly, so
  // the solver sets x to whatever minimizes y; check dual feasibility instead.
  double z = s.values[rv.z];
  double p = s.values[rv.p[0]];
  double proxy = s.values[rv.abs[0]];
  CHECK(z + p >= 0.5 * proxy - 1e-6);
  CHECK(proxy >= std::fabs(s.values[x]) - 1e-6);
}

TEST_CASE("robustify_row validates its inputs") {
  MilpModel m;
  VarId x = m.add_variable("x", 0.0, 10.0);
  RowId le = m.add_constraint("le", {{x, 1.0}}, RowSense::LessEqual, 5.0);
  RowId eq = m.add_constraint("eq", {{x, 1.0}}, RowSense::Equal, 5.0);

  UncertainRowSpec spec;
  spec.row = le;
  spec.entries = {{x, 1.0, 0.5}};
  spec.gamma = 1.0;

  SUBCASE("unknown row") {
    spec.row = 99;
    CHECK_THROWS_AS(robustify_row(m, spec), std::invalid_argument);
  }
  SUBCASE("equality rows have no one-sided protection") {
    spec.row = eq;
    CHECK_THROWS_AS(robustify_row(m, spec), std::invalid_argument);
  }
  SUBCASE("gamma outside [0, |J_n|]") {
    spec.gamma = 1.5;
    CHECK_THROWS_AS(robustify_row(m, spec), std::invalid_argument);
    spec.gamma = -0.1;
    CHECK_THROWS_AS(robustify_row(m, spec), std::invalid_argument);
  }
  SUBCASE("negative deviation") {
    spec.entries[0].deviation = -1.0;
    CHECK_THROWS_AS(robustify_row(m, spec), std::invalid_argument);
  }
  SUBCASE("empty uncertainty set") {
    spec.entries.clear();
    spec.rhs_uncertain = false;
    CHECK_THROWS_AS(robustify_row(m, spec), std::invalid_argument);
  }
}

TEST_CASE("objective protection prices in the cost deviation") {
  // min x s.t. x >= 3 with cost in [1-1, 1+1]. Full protection doubles the
  // effective cost at the optimum: 3 + 1*3 = 6.
  auto solve_with_gamma0 = [](double gamma0) {
    MilpModel m;
    VarId x = m.add_variable("x", 0.0, kInf);
    m.add_constraint("floor", {{x, 1.0}}, RowSense::GreaterEqual, 3.0);
    m.add_objective_term(x, 1.0);
    robustify_objective(m, {{x, 1.0}}, gamma0);
    Solution s = solve_lp(m);
    REQUIRE(s.status == SolveStatus::Optimal);
    return s.objective;
  };
  CHECK(solve_with_gamma0(1.0) == doctest::Approx(6.0));
  CHECK(solve_with_gamma0(0.0) == doctest::Approx(3.0));
}

TEST_CASE("objective protection with no uncertain costs is a no-op") {
  MilpModel m;
  VarId x = m.add_variable("x", 0.0, 5.0);
  m.add_objective_term(x, 1.0);
  int vars_before = m.num_vars();
  int rows_before = m.num_rows();
  robustify_objective(m, {}, 1.0);
  CHECK(m.num_vars() == vars_before);
  CHECK(m.num_rows() == rows_before);
}

TEST_CASE("the shared budget clamps to one uncertain parameter per row") {
  CHECK(effective_gamma(-0.5) == 0.0);
  CHECK(effective_gamma(0.0) == 0.0);
  CHECK(effective_gamma(0.7) == doctest::Approx(0.7));
  CHECK(effective_gamma(1.0) == 1.0);
  CHECK(effective_gamma(4.0) == 1.0);
}

TEST_CASE("zero budget recovers the deterministic optimum") {
  for (std::uint64_t seed : {2ull, 7ull, 13ull}) {
    Instance inst = generate_instance(tiny_shape(), seed);
    RobustConfig cfg;
    cfg.gamma = 0.0;
    cfg.deviation_fraction = 0.1;
    BuildResult det = build_deterministic(inst);
    BuildResult rob = build_robust(inst, cfg);
    CHECK(rob.vars.has_robust_duals());
    SolveOptions opts;
    opts.branch_priority = det.branch_priority;
    Solution sd = solve_milp(det.model, opts);
    opts.branch_priority = rob.branch_priority;
    Solution sr = solve_milp(rob.model, opts);
    REQUIRE(sd.status == SolveStatus::Optimal);
    REQUIRE(sr.status == SolveStatus::Optimal);
    INFO("seed " << seed);
    CHECK(sr.objective ==
          doctest::Approx(sd.objective)
              .epsilon(1e-6));
  }
}

TEST_CASE("full budget matches the worst-case shrunken instance") {
  // With gamma = 1 and 10% deviations the robust counterpart equals the
  // deterministic model whose order caps and budgets shrink by 10%.
  for (std::uint64_t seed : {2ull, 7ull}) {
    Instance inst = generate_instance(tiny_shape(), seed);
    RobustConfig cfg;
    cfg.gamma = 1.0;
    cfg.deviation_fraction = 0.1;
    BuildResult rob = build_robust(inst, cfg);

    Instance shrunk = inst;
    for (SupplierParams& s : shrunk.suppliers) {
      s.budget *= 0.9;
      for (double& mo : s.max_order) mo *= 0.9;
    }
    BuildResult det = build_deterministic(shrunk);

    SolveOptions opts;
    opts.branch_priority = rob.branch_priority;
    Solution sr = solve_milp(rob.model, opts);
    opts.branch_priority = det.branch_priority;
    Solution sd = solve_milp(det.model, opts);
    REQUIRE(sr.status == sd.status);
    if (sr.status == SolveStatus::Optimal) {
      INFO("seed " << seed);
      CHECK(sr.objective == doctest::Approx(sd.objective).epsilon(1e-6));
    }
  }
}

TEST_CASE("the robust optimum is non-decreasing in the budget") {
  Instance inst = generate_instance(tiny_shape(), 4);
  double prev = -kInf;
  for (double gamma : {0.0, 0.5, 1.0}) {
    RobustConfig cfg;
    cfg.gamma = gamma;
    cfg.deviation_fraction = 0.15;
    BuildResult rob = build_robust(inst, cfg);
    SolveOptions opts;
    opts.branch_priority = rob.branch_priority;
    Solution s = solve_milp(rob.model, opts);
    REQUIRE(s.status == SolveStatus::Optimal);
    INFO("gamma " << gamma);
    CHECK(s.objective >= prev - 1e-6 * std::max(1.0, std::abs(prev)));
    prev = s.objective;
  }
}

TEST_CASE("robust dual rows hold at the optimum") {
  Instance inst = generate_instance(tiny_shape(), 9);
  RobustConfig cfg;
  cfg.gamma = 0.6;
  cfg.deviation_fraction = 0.2;
  BuildResult rob = build_robust(inst, cfg);
  SolveOptions opts;
  opts.branch_priority = rob.branch_priority;
  Solution s = solve_milp(rob.model, opts);
  REQUIRE(s.status == SolveStatus::Optimal);
  const VariableIndex& ix = rob.vars;
  const Dimensions& d = inst.dims;
  for (int i = 0; i < d.suppliers; ++i) {
    for (int v = 0; v < d.vaccines; ++v) {
      double dev = 0.2 * inst.suppliers[i].max_order[v];
      for (int t = 0; t < d.periods; ++t) {
        CHECK(s.values[ix.r1(i, t)] + s.values[ix.h1(i, t)] >= dev - 1e-6);
      }
    }
    double bdev = 0.2 * inst.suppliers[i].budget;
    CHECK(s.values[ix.r2(i)] + s.values[ix.h2(i)] >= bdev - 1e-6);
  }
  ValidationReport rep = check_solution(rob.model, s, 1e-6, inst, rob.vars);
  CHECK(rep.clean());
}

TEST_CASE("explicit deviation arrays are validated") {
  Instance inst = generate_instance(tiny_shape(), 4);
  RobustConfig cfg;
  cfg.gamma = 0.5;

  SUBCASE("wrong max-order deviation size") {
    cfg.maxorder_deviation.assign(2, 1.0);  // needs suppliers * vaccines
    CHECK_THROWS_AS(build_robust(inst, cfg), std::invalid_argument);
  }
  SUBCASE("wrong budget deviation size") {
    cfg.budget_deviation.assign(1, 1.0);  // needs one per supplier
    CHECK_THROWS_AS(build_robust(inst, cfg), std::invalid_argument);
  }
  SUBCASE("negative deviation") {
    cfg.budget_deviation.assign(inst.dims.suppliers, -1.0);
    CHECK_THROWS_AS(build_robust(inst, cfg), std::invalid_argument);
  }
  SUBCASE("negative deviation fraction") {
    cfg.deviation_fraction = -0.1;
    CHECK_THROWS_AS(build_robust(inst, cfg), std::invalid_argument);
  }
}
