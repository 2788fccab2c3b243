#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "coldchain/builder.hpp"
#include "coldchain/instance.hpp"
#include "coldchain/solver.hpp"

using namespace coldchain;

namespace {

Dimensions shape(int t, int j, int k, int v, int a, int s = 3) {
  Dimensions d;
  d.suppliers = s;
  d.dcs = j;
  d.vcs = k;
  d.vaccines = v;
  d.age_groups = a;
  d.periods = t;
  return d;
}

}  // namespace

TEST_CASE("variable blocks have the published family sizes for preset 1") {
  Instance inst = generate_instance(1, 42);
  BuildResult b = build_deterministic(inst);
  const VariableIndex& ix = b.vars;
  // S=3, J=10, K=20, V=2, A=10, T=5.
  CHECK(ix.y0 - ix.x0 == 3 * 2 * 5);            // X
  CHECK(ix.w0 - ix.y0 == 3 * 10 * 2 * 5);       // Y
  CHECK(ix.u0 - ix.w0 == 10 * 20 * 2 * 5);      // W
  CHECK(ix.back0 - ix.u0 == 10 * 5);            // u
  CHECK(ix.wb0 - ix.yb0 == 3 * 10 * 5);         // yb
  CHECK(b.model.num_vars() - ix.wb0 == 10 * 20 * 5);  // wb is the last block
  CHECK(b.model.num_binaries() == 10 * 5 + 3 * 10 * 5 + 10 * 20 * 5);
  CHECK_FALSE(ix.has_robust_duals());
  CHECK(b.model.find_variable("X_0_0_0") == ix.x(0, 0, 0));
  CHECK(b.model.find_variable("W_9_19_1_4") == ix.w(9, 19, 1, 4));
  // Indicators branch before age-priority binaries.
  CHECK(b.branch_priority[ix.yb(0, 0, 0)] == 2);
  CHECK(b.branch_priority[ix.wb(0, 0, 0)] == 2);
  CHECK(b.branch_priority[ix.u(0, 0)] == 1);
  CHECK(b.branch_priority[ix.x(0, 0, 0)] == 0);
}

TEST_CASE("builder rejects invalid instances") {
  Instance inst = generate_instance(shape(3, 1, 2, 1, 2), 1);
  inst.weights.theta1 = 0.9;  // weights no longer sum to 1
  CHECK_THROWS_AS(build_deterministic(inst), std::invalid_argument);
}

TEST_CASE("zero vaccine demand solves to a zero plan") {
  Instance inst = generate_instance(shape(3, 1, 2, 1, 2), 5);
  for (double& d : inst.demand.demand) d = 0.0;
  // People still exist; only the vaccine demand is zero.
  for (double& a : inst.demand.age_demand) a = 100.0;
  BuildResult b = build_deterministic(inst);
  Solution s = solve_milp(b.model);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(0.0).epsilon(1e-12));
  ObjectiveComponents c = objective_components(inst, b.vars, s.values);
  CHECK(c.holding == doctest::Approx(0.0));
  CHECK(c.transport == doctest::Approx(0.0));
  CHECK(c.deprivation == doctest::Approx(0.0));
}

TEST_CASE("tiny instances match the brute-force oracle") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Instance inst = generate_instance(shape(2, 1, 1, 1, 2, 2), seed);
    BuildResult b = build_deterministic(inst);
    REQUIRE(b.model.num_binaries() <= 12);
    SolveOptions opts;
    opts.branch_priority = b.branch_priority;
    Solution bb = solve_milp(b.model, opts);
    Solution bf = brute_force_binaries(b.model);
    INFO("seed " << seed);
    CHECK(bb.status == bf.status);
    if (bb.status == SolveStatus::Optimal) {
      CHECK(bb.objective == doctest::Approx(bf.objective).epsilon(1e-6));
    }
  }
}

TEST_CASE("model objective equals the weighted component decomposition") {
  Instance inst = generate_instance(shape(3, 2, 3, 1, 3), 11);
  BuildResult b = build_deterministic(inst);
  SolveOptions opts;
  opts.branch_priority = b.branch_priority;
  Solution s = solve_milp(b.model, opts);
  REQUIRE(s.status == SolveStatus::Optimal);
  ObjectiveComponents c = objective_components(inst, b.vars, s.values);
  CHECK(c.weighted_total ==
        doctest::Approx(s.objective).epsilon(1e-9));
  CHECK(c.weighted_total ==
        doctest::Approx(inst.weights.theta1 * c.holding +
                        inst.weights.theta2 * c.transport +
                        inst.weights.theta3 * c.deprivation));

  // Deprivation equals the backorder-weighted intensity sum.
  double p3 = 0.0;
  for (int k = 0; k < inst.dims.vcs; ++k)
    for (int v = 0; v < inst.dims.vaccines; ++v)
      for (int t = 0; t < inst.dims.periods; ++t)
        p3 += deprivation_intensity(t + 1, inst.weights.deprivation_slope) *
              s.values[b.vars.back(k, v, t)];
  CHECK(c.deprivation == doctest::Approx(p3).epsilon(1e-9));
}

TEST_CASE("optimal solutions satisfy the planning-domain invariants") {
  Instance inst = generate_instance(shape(4, 2, 4, 1, 4), 21);
  BuildResult b = build_deterministic(inst);
  SolveOptions opts;
  opts.branch_priority = b.branch_priority;
  Solution s = solve_milp(b.model, opts);
  REQUIRE(s.status == SolveStatus::Optimal);
  ValidationReport rep = check_solution(b.model, s, 1e-6, inst, b.vars);
  for (const std::string& viol : rep.domain_violations) {
    INFO(viol);
    CHECK(false);
  }
  CHECK(rep.clean());
}

TEST_CASE("the domain checker flags corrupted solutions") {
  Instance inst = generate_instance(shape(3, 1, 2, 1, 3), 8);
  BuildResult b = build_deterministic(inst);
  Solution s = solve_milp(b.model);
  REQUIRE(s.status == SolveStatus::Optimal);

  SUBCASE("age-priority inversion") {
    Solution bad = s;
    bad.values[b.vars.u(0, 2)] = 0.0;
    bad.values[b.vars.u(1, 2)] = 1.0;
    ValidationReport rep = check_solution(b.model, bad, 1e-6, inst, b.vars);
    bool found = false;
    for (const std::string& v : rep.domain_violations) {
      if (v.find("age_priority") != std::string::npos) found = true;
    }
    CHECK(found);
  }
  SUBCASE("broken backorder chain") {
    Solution bad = s;
    bad.values[b.vars.back(0, 0, 1)] += 50.0;
    ValidationReport rep = check_solution(b.model, bad, 1e-6, inst, b.vars);
    CHECK_FALSE(rep.clean());
  }
  SUBCASE("service floor breach") {
    Solution bad = s;
    for (int j = 0; j < inst.dims.dcs; ++j) {
      bad.values[b.vars.w(j, 0, 0, 2)] = 0.0;
    }
    bad.values[b.vars.q(0, 0, 2)] = 100.0;
    ValidationReport rep = check_solution(b.model, bad, 1e-6, inst, b.vars);
    bool found = false;
    for (const std::string& v : rep.domain_violations) {
      if (v.find("service_floor") != std::string::npos) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("shrinking a supplier budget can only increase the optimum") {
  Instance inst = generate_instance(shape(3, 1, 3, 1, 3), 17);
  BuildResult base = build_deterministic(inst);
  Solution s0 = solve_milp(base.model);
  REQUIRE(s0.status == SolveStatus::Optimal);

  Instance cut = inst;
  for (SupplierParams& s : cut.suppliers) s.budget *= 0.25;
  BuildResult tight = build_deterministic(cut);
  Solution s1 = solve_milp(tight.model);
  if (s1.status == SolveStatus::Optimal) {
    CHECK(s1.objective >=
          s0.objective - 1e-6 * std::max(1.0, std::abs(s0.objective)));
  } else {
    CHECK(s1.status == SolveStatus::Infeasible);
  }
}

TEST_CASE("periods before the shortest lead time admit no deliveries") {
  Instance inst = generate_instance(shape(4, 1, 2, 1, 2), 33);
  int min_lead = inst.dims.periods;
  for (const SupplierParams& s : inst.suppliers)
    min_lead = std::min(min_lead, s.lead_time);
  REQUIRE(min_lead >= 1);
  BuildResult b = build_deterministic(inst);
  Solution s = solve_milp(b.model);
  REQUIRE(s.status == SolveStatus::Optimal);
  for (int i = 0; i < inst.dims.suppliers; ++i)
    for (int j = 0; j < inst.dims.dcs; ++j)
      for (int v = 0; v < inst.dims.vaccines; ++v)
        for (int t = 0; t < min_lead; ++t)
          CHECK(s.values[b.vars.y(i, j, v, t)] == doctest::Approx(0.0));
}
