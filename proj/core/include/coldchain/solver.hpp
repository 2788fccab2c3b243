#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "coldchain/milp.hpp"

namespace coldchain {

enum class SolveStatus {
  Optimal,
  FeasibleGap,  // incumbent found but gap target not met within limits
  Infeasible,
  Unbounded,
  LimitHit,  // limit reached with no incumbent
  Error,
};

const char* to_string(SolveStatus s);

enum class BranchRule { MostFractional, FirstIndex };
enum class NodeOrder { BestBound, DepthFirst };

struct SolveOptions {
  double feas_tol = 1e-7;
  double int_tol = 1e-6;
  double mip_gap = 1e-6;  // relative
  long node_limit = 0;    // 0 = unlimited
  double time_limit = 0;  // seconds, 0 = unlimited
  BranchRule branch_rule = BranchRule::MostFractional;
  NodeOrder node_order = NodeOrder::BestBound;
  // Optional per-variable branching priority (higher first); the builder uses
  // this to branch shipment indicators before age-priority variables.
  std::vector<int> branch_priority;
  std::ostream* log = nullptr;  // one line per node when set
  int heuristic_every = 25;     // rounding heuristic frequency, in nodes
};

struct Solution {
  SolveStatus status = SolveStatus::Error;
  std::vector<double> values;  // by VarId; empty when no point available
  double objective = 0.0;
  double bound = 0.0;  // best dual bound
  double gap = 0.0;    // relative
  long nodes = 0;
  double wall_time = 0.0;  // seconds
  long lp_iterations = 0;
  std::string message;

  bool has_point() const { return !values.empty(); }
};

/// Solves the LP relaxation (binaries relaxed to their bounds) with a
/// bounded-variable primal simplex. On optimal exit `bound` carries the
/// independently recomputed dual objective.
Solution solve_lp(const MilpModel& model, const SolveOptions& opts = {});

/// Best-bound branch and bound over binary variables.
Solution solve_milp(const MilpModel& model, const SolveOptions& opts = {});

/// Exhaustive test oracle: enumerates all binary assignments (at most
/// 2^max_binaries) and solves the continuous LP for each.
Solution brute_force_binaries(const MilpModel& model,
                              const SolveOptions& opts = {},
                              int max_binaries = 20);

struct ValidationReport {
  EvalReport eval;
  std::vector<std::string> domain_violations;  // filled by the builder overload
  bool clean() const { return eval.feasible() && domain_violations.empty(); }
};

ValidationReport check_solution(const MilpModel& model, const Solution& sol,
                                double tol = 1e-6);

}  // namespace coldchain
