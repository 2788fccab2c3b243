#pragma once

#include <utility>
#include <vector>

#include "coldchain/builder.hpp"
#include "coldchain/instance.hpp"
#include "coldchain/milp.hpp"

namespace coldchain {

/// One interval-uncertain coefficient of a row: the true value lies in
/// [nominal - deviation, nominal + deviation].
struct UncertainEntry {
  VarId var = -1;
  double nominal = 0.0;
  double deviation = 0.0;
};

struct UncertainRowSpec {
  RowId row = -1;
  std::vector<UncertainEntry> entries;  // J_n
  double gamma = 0.0;                   // budget in [0, |J_n|]
  // Right-hand-side uncertainty, realized as a coefficient on an auxiliary
  // variable fixed at 1 (counts toward |J_n|).
  bool rhs_uncertain = false;
  double rhs_deviation = 0.0;
};

/// Variables added by robustify_row. abs[j] is the |x_j| proxy for entry j:
/// the entry's own variable when its lower bound is already >= 0, otherwise a
/// fresh y_j with x_j <= y_j and -x_j <= y_j.
struct RobustRowVars {
  VarId z = -1;
  std::vector<VarId> p;    // one per uncertain entry (rhs aux last when used)
  std::vector<VarId> abs;  // matching |.| proxies
  VarId rhs_aux = -1;      // fixed-at-1 auxiliary, -1 when rhs is certain
};

/// Dualizes the interval uncertainty on one inequality row in place: the row
/// gains z*Gamma + sum(p_j) of protection (subtracted for >= rows) and dual
/// feasibility rows z + p_j >= dev_j * |x_j| are appended.
RobustRowVars robustify_row(MilpModel& model, const UncertainRowSpec& spec);

/// Dualizes cost uncertainty: the objective gains z0*Gamma0 + sum(p_0j) with
/// rows z0 + p_0j >= dev_j * |x_j|. No-op when entries is empty.
void robustify_objective(MilpModel& model,
                         const std::vector<std::pair<VarId, double>>& entries,
                         double gamma0);

/// Gamma applied per protected row; every row carries a single uncertain
/// parameter, so the shared budget clamps to [0, 1].
double effective_gamma(double gamma);

/// Deterministic model with the order-cap and budget rows replaced by their
/// robust counterparts (duals r1/H1 per supplier-period, r2/H2 per supplier).
/// Deviations come from cfg's explicit arrays when given, otherwise
/// deviation_fraction times the nominal value.
BuildResult build_robust(const Instance& inst, const RobustConfig& cfg);

}  // namespace coldchain
