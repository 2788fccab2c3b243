#pragma once

#include <vector>

#include "coldchain/instance.hpp"
#include "coldchain/milp.hpp"
#include "coldchain/solver.hpp"

namespace coldchain {

/// Maps every planning variable family to its contiguous id block. All
/// accessors take 0-based indices; period t stands for calendar period t+1.
struct VariableIndex {
  Dimensions dims;
  int x0 = -1;       // orders X[i][v][t]
  int y0 = -1;       // supplier->dc shipments Y[i][j][v][t]
  int w0 = -1;       // dc->vc shipments W[j][k][v][t]
  int u0 = -1;       // age-group eligibility u[a][t], binary
  int back0 = -1;    // backorders back[k][v][t]
  int q0 = -1;       // demand to satisfy q[k][v][t]
  int qsat0 = -1;    // satisfied demand q'[k][v][t]
  int inv0 = -1;     // supplier inventory inv[i][v][t]
  int invd0 = -1;    // dc inventory invd[j][v][t]
  int qdc0 = -1;     // dc demand aggregate Q[j][v][t]
  int qsatdc0 = -1;  // dc supplied aggregate Q'[j][v][t]
  int yb0 = -1;      // supplier->dc indicators yb[i][j][t], binary
  int wb0 = -1;      // dc->vc indicators wb[j][k][t], binary
  // Robust duals (present only in robust builds).
  int r1_0 = -1;  // r1[i][t]
  int h1_0 = -1;  // H1[i][t]
  int r2_0 = -1;  // r2[i]
  int h2_0 = -1;  // H2[i]

  int x(int i, int v, int t) const {
    return x0 + (i * dims.vaccines + v) * dims.periods + t;
  }
  int y(int i, int j, int v, int t) const {
    return y0 + ((i * dims.dcs + j) * dims.vaccines + v) * dims.periods + t;
  }
  int w(int j, int k, int v, int t) const {
    return w0 + ((j * dims.vcs + k) * dims.vaccines + v) * dims.periods + t;
  }
  int u(int a, int t) const { return u0 + a * dims.periods + t; }
  int back(int k, int v, int t) const {
    return back0 + (k * dims.vaccines + v) * dims.periods + t;
  }
  int q(int k, int v, int t) const {
    return q0 + (k * dims.vaccines + v) * dims.periods + t;
  }
  int qsat(int k, int v, int t) const {
    return qsat0 + (k * dims.vaccines + v) * dims.periods + t;
  }
  int inv(int i, int v, int t) const {
    return inv0 + (i * dims.vaccines + v) * dims.periods + t;
  }
  int invd(int j, int v, int t) const {
    return invd0 + (j * dims.vaccines + v) * dims.periods + t;
  }
  int qdc(int j, int v, int t) const {
    return qdc0 + (j * dims.vaccines + v) * dims.periods + t;
  }
  int qsatdc(int j, int v, int t) const {
    return qsatdc0 + (j * dims.vaccines + v) * dims.periods + t;
  }
  int yb(int i, int j, int t) const {
    return yb0 + (i * dims.dcs + j) * dims.periods + t;
  }
  int wb(int j, int k, int t) const {
    return wb0 + (j * dims.vcs + k) * dims.periods + t;
  }
  int r1(int i, int t) const { return r1_0 + i * dims.periods + t; }
  int h1(int i, int t) const { return h1_0 + i * dims.periods + t; }
  int r2(int i) const { return r2_0 + i; }
  int h2(int i) const { return h2_0 + i; }
  bool has_robust_duals() const { return r1_0 >= 0; }
};

struct BuildResult {
  MilpModel model;
  VariableIndex vars;
  // Shipment indicators branch before age-priority binaries.
  std::vector<int> branch_priority;
};

/// Translates a validated instance into the deterministic planning MILP.
/// Throws std::invalid_argument when validate_instance reports violations.
BuildResult build_deterministic(const Instance& inst);

struct ObjectiveComponents {
  double holding = 0.0;        // P1
  double transport = 0.0;      // P2
  double deprivation = 0.0;    // P3
  double weighted_total = 0.0; // Z
};

ObjectiveComponents objective_components(const Instance& inst,
                                         const VariableIndex& vars,
                                         const std::vector<double>& values);

/// Row/bound/integrality checks plus the planning-domain invariants
/// (age-priority prefix, equity gap, service floor, backorder chaining,
/// nonnegative inventories, capacities).
ValidationReport check_solution(const MilpModel& model, const Solution& sol,
                                double tol, const Instance& inst,
                                const VariableIndex& vars);

}  // namespace coldchain
