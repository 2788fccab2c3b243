#include <cmath>
#include <sstream>

#include "coldchain/builder.hpp"

namespace coldchain {

namespace {

std::string describe(const char* what, std::initializer_list<int> idx,
                     double lhs, double rhs) {
  std::ostringstream os;
  os << what << "[";
  bool first = true;
  for (int i : idx) {
    if (!first) os << ",";
    os << i;
    first = false;
  }
  os << "]: " << lhs << " vs " << rhs;
  return os.str();
}

}  // namespace

ValidationReport check_solution(const MilpModel& model, const Solution& sol,
                                double tol, const Instance& inst,
                                const VariableIndex& ix) {
  ValidationReport rep = check_solution(model, sol, tol);
  if (!sol.has_point()) {
    rep.domain_violations.push_back("no solution point to check");
    return rep;
  }
  const Dimensions& d = inst.dims;
  const std::vector<double>& x = sol.values;
  auto& out = rep.domain_violations;

  // Age-group priority: a later group may only open once every earlier one is.
  for (int a = 0; a + 1 < d.age_groups; ++a)
    for (int t = 0; t < d.periods; ++t)
      if (x[ix.u(a + 1, t)] > x[ix.u(a, t)] + tol)
        out.push_back(describe("age_priority", {a, t}, x[ix.u(a + 1, t)],
                               x[ix.u(a, t)]));

  // Equity: coverage-rate spread between any two dcs stays within tolerance.
  const double xi = inst.demand.equity_tolerance;
  for (int j = 0; j < d.dcs; ++j)
    for (int jp = j + 1; jp < d.dcs; ++jp) {
      double dj = inst.dc_total_age_demand(j);
      double djp = inst.dc_total_age_demand(jp);
      for (int v = 0; v < d.vaccines; ++v)
        for (int t = 0; t < d.periods; ++t) {
          double gap = std::fabs(x[ix.qsatdc(j, v, t)] / dj -
                                 x[ix.qsatdc(jp, v, t)] / djp);
          if (gap > xi + tol)
            out.push_back(describe("equity", {j, jp, v, t}, gap, xi));
        }
    }

  // Service floor and backorder chaining.
  for (int k = 0; k < d.vcs; ++k)
    for (int v = 0; v < d.vaccines; ++v)
      for (int t = 0; t < d.periods; ++t) {
        double supplied = 0.0;
        for (int j = 0; j < d.dcs; ++j) supplied += x[ix.w(j, k, v, t)];
        double q = x[ix.q(k, v, t)];
        if (supplied < inst.omega(k, v, t) * q - tol)
          out.push_back(describe("service_floor", {k, v, t}, supplied,
                                 inst.omega(k, v, t) * q));
        double prev_back = t > 0 ? x[ix.back(k, v, t - 1)] : 0.0;
        if (std::fabs(q - inst.d(k, v, t) - prev_back) > tol)
          out.push_back(describe("demand_chain", {k, v, t}, q,
                                 inst.d(k, v, t) + prev_back));
        if (std::fabs(x[ix.back(k, v, t)] - (q - supplied)) > tol)
          out.push_back(describe("backorder", {k, v, t}, x[ix.back(k, v, t)],
                                 q - supplied));
        if (x[ix.back(k, v, t)] < -tol)
          out.push_back(
              describe("backorder_sign", {k, v, t}, x[ix.back(k, v, t)], 0.0));
      }

  // Inventory nonnegativity and capacities.
  for (int i = 0; i < d.suppliers; ++i)
    for (int t = 0; t < d.periods; ++t) {
      double held = 0.0;
      for (int v = 0; v < d.vaccines; ++v) {
        double h = x[ix.inv(i, v, t)];
        if (h < -tol) out.push_back(describe("supplier_inv", {i, v, t}, h, 0.0));
        held += h;
      }
      if (held > inst.suppliers[i].capacity + tol)
        out.push_back(describe("supplier_capacity", {i, t}, held,
                               inst.suppliers[i].capacity));
    }
  for (int j = 0; j < d.dcs; ++j)
    for (int t = 0; t < d.periods; ++t) {
      double held = 0.0;
      for (int v = 0; v < d.vaccines; ++v) {
        double h = x[ix.invd(j, v, t)];
        if (h < -tol) out.push_back(describe("dc_inv", {j, v, t}, h, 0.0));
        held += h;
      }
      if (held > inst.network.dc_capacity[j] + tol)
        out.push_back(describe("dc_capacity", {j, t}, held,
                               inst.network.dc_capacity[j]));
    }
  return rep;
}

}  // namespace coldchain
