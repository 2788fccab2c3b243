#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "build_internal.hpp"
#include "coldchain/builder.hpp"

namespace coldchain {

namespace {

std::string vname(const char* base, std::initializer_list<int> idx) {
  std::ostringstream os;
  os << base;
  for (int i : idx) os << "_" << i;
  return os.str();
}

}  // namespace

namespace detail {

BuildResult build_model(const Instance& inst, const RobustSpec* robust) {
  {
    std::vector<std::string> violations = validate_instance(inst);
    if (!violations.empty()) {
      throw std::invalid_argument("invalid instance: " + violations.front() +
                                  (violations.size() > 1 ? " (and more)" : ""));
    }
  }
  const Dimensions& d = inst.dims;
  const int S = d.suppliers, J = d.dcs, K = d.vcs, V = d.vaccines,
            A = d.age_groups, T = d.periods;
  const ObjectiveWeights& th = inst.weights;

  BuildResult out;
  MilpModel& m = out.model;
  VariableIndex& ix = out.vars;
  ix.dims = d;

  // Cumulative demand per (k, v, t); a valid cap on q, back, q' and W.
  std::vector<double> cum(static_cast<std::size_t>(K) * V * T, 0.0);
  double total_demand = 0.0;
  for (int k = 0; k < K; ++k) {
    for (int v = 0; v < V; ++v) {
      double run = 0.0;
      for (int t = 0; t < T; ++t) {
        run += inst.d(k, v, t);
        cum[(static_cast<std::size_t>(k) * V + v) * T + t] = run;
      }
      total_demand += run;
    }
  }
  auto cum_at = [&](int k, int v, int t) {
    return cum[(static_cast<std::size_t>(k) * V + v) * T + t];
  };
  (void)total_demand;
  auto members = inst.dc_members();

  // Valid cap on one supplier->dc shipment: supplier inventory balance limits
  // cumulative shipments to the in-window orders, and dc inventory balance
  // limits one arrival to the dc capacity plus in-window member offtake.
  auto y_cap = [&](int i, int j, int v, int t) {
    int lead = inst.suppliers[i].lead_time;
    int shelf = inst.vaccines[v].shelf_life;
    int window = t - lead - std::max(0, t - shelf) + 1;
    if (window <= 0) return 0.0;
    double from_orders = window * inst.suppliers[i].max_order[v];
    double into_dc = inst.network.dc_capacity[j];
    for (int k : members[j]) into_dc += cum_at(k, v, t);
    return std::min(from_orders, into_dc);
  };

  // --- Variables (block order is part of the index contract) ---
  for (int i = 0; i < S; ++i)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t) {
        int id = m.add_variable(vname("X", {i, v, t}), 0.0,
                                inst.suppliers[i].max_order[v]);
        if (ix.x0 < 0) ix.x0 = id;
      }
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < J; ++j)
      for (int v = 0; v < V; ++v)
        for (int t = 0; t < T; ++t) {
          int id = m.add_variable(vname("Y", {i, j, v, t}), 0.0,
                                  y_cap(i, j, v, t));
          if (ix.y0 < 0) ix.y0 = id;
        }
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k)
      for (int v = 0; v < V; ++v)
        for (int t = 0; t < T; ++t) {
          int id = m.add_variable(vname("W", {j, k, v, t}), 0.0,
                                  cum_at(k, v, t));
          if (ix.w0 < 0) ix.w0 = id;
        }
  for (int a = 0; a < A; ++a)
    for (int t = 0; t < T; ++t) {
      int id = m.add_variable(vname("u", {a, t}), 0.0, 1.0, VarKind::Binary);
      if (ix.u0 < 0) ix.u0 = id;
    }
  auto add_kvt_block = [&](const char* base, int& offset, bool cap_by_cum) {
    for (int k = 0; k < K; ++k)
      for (int v = 0; v < V; ++v)
        for (int t = 0; t < T; ++t) {
          int id = m.add_variable(vname(base, {k, v, t}), 0.0,
                                  cap_by_cum ? cum_at(k, v, t) : kInf);
          if (offset < 0) offset = id;
        }
  };
  add_kvt_block("back", ix.back0, true);
  add_kvt_block("q", ix.q0, true);
  add_kvt_block("qp", ix.qsat0, true);
  for (int i = 0; i < S; ++i)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t) {
        int id = m.add_variable(vname("inv", {i, v, t}), 0.0,
                                inst.suppliers[i].capacity);
        if (ix.inv0 < 0) ix.inv0 = id;
      }
  for (int j = 0; j < J; ++j)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t) {
        int id = m.add_variable(vname("invd", {j, v, t}), 0.0,
                                inst.network.dc_capacity[j]);
        if (ix.invd0 < 0) ix.invd0 = id;
      }
  for (int j = 0; j < J; ++j)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t) {
        int id = m.add_variable(vname("Q", {j, v, t}), 0.0, kInf);
        if (ix.qdc0 < 0) ix.qdc0 = id;
      }
  for (int j = 0; j < J; ++j)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t) {
        int id = m.add_variable(vname("Qp", {j, v, t}), 0.0, kInf);
        if (ix.qsatdc0 < 0) ix.qsatdc0 = id;
      }
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < J; ++j)
      for (int t = 0; t < T; ++t) {
        int id = m.add_variable(vname("yb", {i, j, t}), 0.0, 1.0,
                                VarKind::Binary);
        if (ix.yb0 < 0) ix.yb0 = id;
      }
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k)
      for (int t = 0; t < T; ++t) {
        int id = m.add_variable(vname("wb", {j, k, t}), 0.0, 1.0,
                                VarKind::Binary);
        if (ix.wb0 < 0) ix.wb0 = id;
      }
  if (robust) {
    for (int i = 0; i < S; ++i)
      for (int t = 0; t < T; ++t) {
        int id = m.add_variable(vname("r1", {i, t}), 0.0, kInf);
        if (ix.r1_0 < 0) ix.r1_0 = id;
      }
    for (int i = 0; i < S; ++i)
      for (int t = 0; t < T; ++t) {
        int id = m.add_variable(vname("H1", {i, t}), 0.0, kInf);
        if (ix.h1_0 < 0) ix.h1_0 = id;
      }
    for (int i = 0; i < S; ++i) {
      int id = m.add_variable(vname("r2", {i}), 0.0, kInf);
      if (ix.r2_0 < 0) ix.r2_0 = id;
    }
    for (int i = 0; i < S; ++i) {
      int id = m.add_variable(vname("H2", {i}), 0.0, kInf);
      if (ix.h2_0 < 0) ix.h2_0 = id;
    }
  }

  // --- Objective: Z = th1*P1 + th2*P2 + th3*P3 ---
  for (int i = 0; i < S; ++i)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t)
        m.add_objective_term(ix.inv(i, v, t),
                             th.theta1 * inst.vaccines[v].holding_cost);
  for (int j = 0; j < J; ++j)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t)
        m.add_objective_term(ix.invd(j, v, t),
                             th.theta1 * inst.vaccines[v].holding_cost);
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < J; ++j)
      for (int t = 0; t < T; ++t)
        m.add_objective_term(ix.yb(i, j, t), th.theta2 * inst.fixed_s2d(i, j));
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < J; ++j)
      for (int v = 0; v < V; ++v)
        for (int t = 0; t < T; ++t)
          m.add_objective_term(ix.y(i, j, v, t),
                               th.theta2 * inst.cost_s2d(i, j, v));
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k)
      for (int t = 0; t < T; ++t)
        m.add_objective_term(ix.wb(j, k, t), th.theta2 * inst.fixed_d2v(j, k));
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k)
      for (int v = 0; v < V; ++v)
        for (int t = 0; t < T; ++t)
          m.add_objective_term(ix.w(j, k, v, t),
                               th.theta2 * inst.cost_d2v(j, k, v));
  for (int k = 0; k < K; ++k)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t) {
        double r = deprivation_intensity(t + 1, th.deprivation_slope);
        m.add_objective_term(ix.q(k, v, t), th.theta3 * r);
        m.add_objective_term(ix.qsat(k, v, t), -th.theta3 * r);
      }

  // --- Constraints ---
  // q'_kvt = sum_j W_jkvt (definition of satisfied demand)
  for (int k = 0; k < K; ++k)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t) {
        std::vector<LinTerm> terms{{ix.qsat(k, v, t), 1.0}};
        for (int j = 0; j < J; ++j) terms.push_back({ix.w(j, k, v, t), -1.0});
        m.add_constraint(vname("link_qsat", {k, v, t}), std::move(terms),
                         RowSense::Equal, 0.0);
      }

  // (5) / robust (44): order caps per (i, v, t)
  for (int i = 0; i < S; ++i)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t) {
        std::vector<LinTerm> terms{{ix.x(i, v, t), 1.0}};
        if (robust) {
          terms.push_back({ix.r1(i, t), robust->gamma});
          terms.push_back({ix.h1(i, t), 1.0});
        }
        m.add_constraint(vname(robust ? "rob44_maxorder" : "eq5_maxorder",
                               {i, v, t}),
                         std::move(terms), RowSense::LessEqual,
                         inst.suppliers[i].max_order[v]);
      }

  // (6) / robust (45): supplier budgets
  for (int i = 0; i < S; ++i) {
    std::vector<LinTerm> terms;
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t)
        terms.push_back({ix.x(i, v, t), inst.suppliers[i].price[v]});
    if (robust) {
      terms.push_back({ix.r2(i), robust->gamma});
      terms.push_back({ix.h2(i), 1.0});
    }
    m.add_constraint(vname(robust ? "rob45_budget" : "eq6_budget", {i}),
                     std::move(terms), RowSense::LessEqual,
                     inst.suppliers[i].budget);
  }

  if (robust) {
    // (46)-(47): dual feasibility for the protected rows
    for (int i = 0; i < S; ++i)
      for (int v = 0; v < V; ++v)
        for (int t = 0; t < T; ++t)
          m.add_constraint(
              vname("rob46_dual_maxorder", {i, v, t}),
              {{ix.r1(i, t), 1.0}, {ix.h1(i, t), 1.0}},
              RowSense::GreaterEqual,
              robust->maxorder_dev[static_cast<std::size_t>(i) * V + v]);
    for (int i = 0; i < S; ++i)
      m.add_constraint(vname("rob47_dual_budget", {i}),
                       {{ix.r2(i), 1.0}, {ix.h2(i), 1.0}},
                       RowSense::GreaterEqual, robust->budget_dev[i]);
  }

  // (7): supplier capacity over the whole horizon
  for (int i = 0; i < S; ++i) {
    std::vector<LinTerm> terms;
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t) terms.push_back({ix.x(i, v, t), 1.0});
    for (int j = 0; j < J; ++j)
      for (int v = 0; v < V; ++v)
        for (int t = 0; t < T; ++t) terms.push_back({ix.y(i, j, v, t), -1.0});
    m.add_constraint(vname("eq7_supcap_total", {i}), std::move(terms),
                     RowSense::LessEqual, inst.suppliers[i].capacity);
  }

  // (8): shipments limited to orders within the freshness/lead window
  for (int i = 0; i < S; ++i) {
    int lead = inst.suppliers[i].lead_time;
    for (int j = 0; j < J; ++j)
      for (int v = 0; v < V; ++v) {
        int shelf = inst.vaccines[v].shelf_life;
        for (int t = 0; t < T; ++t) {
          int lo = std::max(0, t - shelf);
          int hi = t - lead;
          std::vector<LinTerm> terms{{ix.y(i, j, v, t), 1.0}};
          for (int tp = lo; tp <= hi; ++tp)
            terms.push_back({ix.x(i, v, tp), -1.0});
          m.add_constraint(vname("eq8_ship_window", {i, j, v, t}),
                           std::move(terms), RowSense::LessEqual, 0.0);
        }
      }
  }

  // (9): supplier inventory = windowed orders - cumulative shipments
  for (int i = 0; i < S; ++i) {
    int lead = inst.suppliers[i].lead_time;
    for (int v = 0; v < V; ++v) {
      int shelf = inst.vaccines[v].shelf_life;
      for (int t = 0; t < T; ++t) {
        std::vector<LinTerm> terms{{ix.inv(i, v, t), 1.0}};
        int lo = std::max(0, t - shelf);
        for (int tp = lo; tp <= t - lead; ++tp)
          terms.push_back({ix.x(i, v, tp), -1.0});
        for (int j = 0; j < J; ++j)
          for (int tp = 0; tp <= t; ++tp)
            terms.push_back({ix.y(i, j, v, tp), 1.0});
        m.add_constraint(vname("eq9_inv_def", {i, v, t}), std::move(terms),
                         RowSense::Equal, 0.0);
      }
    }
  }

  // (10): per-period supplier inventory capacity
  for (int i = 0; i < S; ++i)
    for (int t = 0; t < T; ++t) {
      std::vector<LinTerm> terms;
      for (int v = 0; v < V; ++v) terms.push_back({ix.inv(i, v, t), 1.0});
      m.add_constraint(vname("eq10_supcap", {i, t}), std::move(terms),
                       RowSense::LessEqual, inst.suppliers[i].capacity);
    }

  // (11): dc inventory over the freshness window
  for (int j = 0; j < J; ++j)
    for (int v = 0; v < V; ++v) {
      int shelf = inst.vaccines[v].shelf_life;
      for (int t = 0; t < T; ++t) {
        int lo = std::max(0, t - shelf);
        std::vector<LinTerm> terms{{ix.invd(j, v, t), 1.0}};
        for (int i = 0; i < S; ++i)
          for (int tp = lo; tp <= t; ++tp)
            terms.push_back({ix.y(i, j, v, tp), -1.0});
        for (int k = 0; k < K; ++k)
          for (int tp = lo; tp <= t; ++tp)
            terms.push_back({ix.w(j, k, v, tp), 1.0});
        m.add_constraint(vname("eq11_invd_def", {j, v, t}), std::move(terms),
                         RowSense::Equal, 0.0);
      }
    }

  // (12): dc capacity
  for (int j = 0; j < J; ++j)
    for (int t = 0; t < T; ++t) {
      std::vector<LinTerm> terms;
      for (int v = 0; v < V; ++v) terms.push_back({ix.invd(j, v, t), 1.0});
      m.add_constraint(vname("eq12_dccap", {j, t}), std::move(terms),
                       RowSense::LessEqual, inst.network.dc_capacity[j]);
    }

  // (13)-(14): demand chaining and backorders
  for (int k = 0; k < K; ++k)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t) {
        std::vector<LinTerm> terms{{ix.q(k, v, t), 1.0}};
        if (t > 0) terms.push_back({ix.back(k, v, t - 1), -1.0});
        m.add_constraint(vname("eq13_demand", {k, v, t}), std::move(terms),
                         RowSense::Equal, inst.d(k, v, t));
        std::vector<LinTerm> bt{{ix.back(k, v, t), 1.0},
                                {ix.q(k, v, t), -1.0}};
        for (int j = 0; j < J; ++j) bt.push_back({ix.w(j, k, v, t), 1.0});
        m.add_constraint(vname("eq14_backorder", {k, v, t}), std::move(bt),
                         RowSense::Equal, 0.0);
      }

  // (15): service floor
  for (int k = 0; k < K; ++k)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t) {
        std::vector<LinTerm> terms{{ix.q(k, v, t), inst.omega(k, v, t)}};
        for (int j = 0; j < J; ++j) terms.push_back({ix.w(j, k, v, t), -1.0});
        m.add_constraint(vname("eq15_service", {k, v, t}), std::move(terms),
                         RowSense::LessEqual, 0.0);
      }

  // (16)-(17): dc aggregates over the assigned centers
  for (int j = 0; j < J; ++j)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t) {
        std::vector<LinTerm> qd{{ix.qdc(j, v, t), 1.0}};
        std::vector<LinTerm> qs{{ix.qsatdc(j, v, t), 1.0}};
        for (int k : members[j]) {
          qd.push_back({ix.q(k, v, t), -1.0});
          qs.push_back({ix.qsat(k, v, t), -1.0});
        }
        m.add_constraint(vname("eq16_dc_demand", {j, v, t}), std::move(qd),
                         RowSense::Equal, 0.0);
        m.add_constraint(vname("eq17_dc_supplied", {j, v, t}), std::move(qs),
                         RowSense::Equal, 0.0);
      }

  // (18): pairwise coverage equity, both directions per dc pair
  const double xi = inst.demand.equity_tolerance;
  for (int j = 0; j < J; ++j)
    for (int jp = j + 1; jp < J; ++jp) {
      double dj = inst.dc_total_age_demand(j);
      double djp = inst.dc_total_age_demand(jp);
      for (int v = 0; v < V; ++v)
        for (int t = 0; t < T; ++t) {
          m.add_constraint(vname("eq18_equity_pos", {j, jp, v, t}),
                           {{ix.qsatdc(j, v, t), 1.0 / dj},
                            {ix.qsatdc(jp, v, t), -1.0 / djp}},
                           RowSense::LessEqual, xi);
          m.add_constraint(vname("eq18_equity_neg", {j, jp, v, t}),
                           {{ix.qsatdc(j, v, t), -1.0 / dj},
                            {ix.qsatdc(jp, v, t), 1.0 / djp}},
                           RowSense::LessEqual, xi);
        }
    }

  // (19): demand limited to the eligible age groups' population
  for (int j = 0; j < J; ++j)
    for (int t = 0; t < T; ++t) {
      std::vector<LinTerm> terms;
      for (int k : members[j])
        for (int v = 0; v < V; ++v) terms.push_back({ix.q(k, v, t), 1.0});
      for (int a = 0; a < A; ++a)
        terms.push_back({ix.u(a, t), -inst.age_demand(a, j)});
      m.add_constraint(vname("eq19_age_target", {j, t}), std::move(terms),
                       RowSense::LessEqual, 0.0);
    }

  // (20): older groups (lower index a) unlock first
  for (int a = 0; a + 1 < A; ++a)
    for (int t = 0; t < T; ++t)
      m.add_constraint(vname("eq20_age_priority", {a, t}),
                       {{ix.u(a + 1, t), 1.0}, {ix.u(a, t), -1.0}},
                       RowSense::LessEqual, 0.0);

  // (21)-(22): shipment indicators
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < J; ++j)
      for (int v = 0; v < V; ++v)
        for (int t = 0; t < T; ++t)
          m.add_constraint(vname("eq21_link_y", {i, j, v, t}),
                           {{ix.y(i, j, v, t), 1.0},
                            {ix.yb(i, j, t), -y_cap(i, j, v, t)}},
                           RowSense::LessEqual, 0.0);
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k)
      for (int v = 0; v < V; ++v)
        for (int t = 0; t < T; ++t)
          m.add_constraint(vname("eq22_link_w", {j, k, v, t}),
                           {{ix.w(j, k, v, t), 1.0},
                            {ix.wb(j, k, t), -cum_at(k, v, t)}},
                           RowSense::LessEqual, 0.0);

  out.branch_priority.assign(m.num_vars(), 0);
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < J; ++j)
      for (int t = 0; t < T; ++t) out.branch_priority[ix.yb(i, j, t)] = 2;
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k)
      for (int t = 0; t < T; ++t) out.branch_priority[ix.wb(j, k, t)] = 2;
  for (int a = 0; a < A; ++a)
    for (int t = 0; t < T; ++t) out.branch_priority[ix.u(a, t)] = 1;
  return out;
}

}  // namespace detail

BuildResult build_deterministic(const Instance& inst) {
  return detail::build_model(inst, nullptr);
}

ObjectiveComponents objective_components(const Instance& inst,
                                         const VariableIndex& ix,
                                         const std::vector<double>& values) {
  const Dimensions& d = inst.dims;
  auto val = [&](int id) -> double {
    if (id < 0 || id >= static_cast<int>(values.size())) {
      throw std::invalid_argument(
          "objective_components: assignment does not cover the variable index");
    }
    return values[id];
  };
  ObjectiveComponents c;
  for (int i = 0; i < d.suppliers; ++i)
    for (int v = 0; v < d.vaccines; ++v)
      for (int t = 0; t < d.periods; ++t)
        c.holding += val(ix.inv(i, v, t)) * inst.vaccines[v].holding_cost;
  for (int j = 0; j < d.dcs; ++j)
    for (int v = 0; v < d.vaccines; ++v)
      for (int t = 0; t < d.periods; ++t)
        c.holding += val(ix.invd(j, v, t)) * inst.vaccines[v].holding_cost;
  for (int i = 0; i < d.suppliers; ++i)
    for (int j = 0; j < d.dcs; ++j)
      for (int t = 0; t < d.periods; ++t) {
        c.transport += val(ix.yb(i, j, t)) * inst.fixed_s2d(i, j);
        for (int v = 0; v < d.vaccines; ++v)
          c.transport += val(ix.y(i, j, v, t)) * inst.cost_s2d(i, j, v);
      }
  for (int j = 0; j < d.dcs; ++j)
    for (int k = 0; k < d.vcs; ++k)
      for (int t = 0; t < d.periods; ++t) {
        c.transport += val(ix.wb(j, k, t)) * inst.fixed_d2v(j, k);
        for (int v = 0; v < d.vaccines; ++v)
          c.transport += val(ix.w(j, k, v, t)) * inst.cost_d2v(j, k, v);
      }
  for (int k = 0; k < d.vcs; ++k)
    for (int v = 0; v < d.vaccines; ++v)
      for (int t = 0; t < d.periods; ++t) {
        double r =
            deprivation_intensity(t + 1, inst.weights.deprivation_slope);
        c.deprivation += r * (val(ix.q(k, v, t)) - val(ix.qsat(k, v, t)));
      }
  c.weighted_total = inst.weights.theta1 * c.holding +
                     inst.weights.theta2 * c.transport +
                     inst.weights.theta3 * c.deprivation;
  return c;
}

}  // namespace coldchain
