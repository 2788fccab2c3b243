#include <cmath>
#include <sstream>
#include <stdexcept>

#include "build_internal.hpp"
#include "coldchain/robust.hpp"

namespace coldchain {

namespace {

std::string tagged(const char* base, int row, int sub = -1) {
  std::ostringstream os;
  os << base << "_r" << row;
  if (sub >= 0) os << "_" << sub;
  return os.str();
}

}  // namespace

double effective_gamma(double gamma) {
  if (gamma < 0.0) return 0.0;
  return gamma > 1.0 ? 1.0 : gamma;
}

RobustRowVars robustify_row(MilpModel& model, const UncertainRowSpec& spec) {
  if (spec.row < 0 || spec.row >= model.num_rows()) {
    throw std::invalid_argument("robustify_row: unknown row id");
  }
  const LinRow& row = model.row(spec.row);
  if (row.sense == RowSense::Equal) {
    throw std::invalid_argument(
        "robustify_row: equality rows cannot carry interval uncertainty");
  }
  std::size_t set_size = spec.entries.size() + (spec.rhs_uncertain ? 1 : 0);
  if (set_size == 0) {
    throw std::invalid_argument("robustify_row: empty uncertain set");
  }
  if (spec.gamma < 0.0 || spec.gamma > static_cast<double>(set_size)) {
    throw std::invalid_argument(
        "robustify_row: gamma outside [0, |J_n|]");
  }
  for (const UncertainEntry& e : spec.entries) {
    if (e.var < 0 || e.var >= model.num_vars()) {
      throw std::invalid_argument("robustify_row: unknown variable in entry");
    }
    if (e.deviation < 0.0 || !std::isfinite(e.deviation)) {
      throw std::invalid_argument("robustify_row: negative deviation");
    }
  }
  if (spec.rhs_uncertain &&
      (spec.rhs_deviation < 0.0 || !std::isfinite(spec.rhs_deviation))) {
    throw std::invalid_argument("robustify_row: negative rhs deviation");
  }

  // >= rows are protected by subtracting the same dual terms.
  const double side = row.sense == RowSense::GreaterEqual ? -1.0 : 1.0;

  RobustRowVars out;
  out.z = model.add_variable(tagged("z", spec.row), 0.0, kInf);
  model.add_row_terms(spec.row, {{out.z, side * spec.gamma}});

  auto protect = [&](VarId abs_proxy, double deviation, int sub) {
    VarId p = model.add_variable(tagged("p", spec.row, sub), 0.0, kInf);
    model.add_row_terms(spec.row, {{p, side}});
    model.add_constraint(tagged("dual", spec.row, sub),
                         {{out.z, 1.0}, {p, 1.0}, {abs_proxy, -deviation}},
                         RowSense::GreaterEqual, 0.0);
    out.p.push_back(p);
    out.abs.push_back(abs_proxy);
  };

  int sub = 0;
  for (const UncertainEntry& e : spec.entries) {
    VarId proxy = e.var;
    if (model.var(e.var).lower < 0.0) {
      proxy = model.add_variable(tagged("y", spec.row, sub), 0.0, kInf);
      model.add_constraint(tagged("abs_pos", spec.row, sub),
                           {{e.var, 1.0}, {proxy, -1.0}}, RowSense::LessEqual,
                           0.0);
      model.add_constraint(tagged("abs_neg", spec.row, sub),
                           {{e.var, -1.0}, {proxy, -1.0}}, RowSense::LessEqual,
                           0.0);
    }
    protect(proxy, e.deviation, sub);
    ++sub;
  }
  if (spec.rhs_uncertain) {
    out.rhs_aux = model.add_variable(tagged("rhsaux", spec.row), 1.0, 1.0);
    protect(out.rhs_aux, spec.rhs_deviation, sub);
  }
  return out;
}

void robustify_objective(MilpModel& model,
                         const std::vector<std::pair<VarId, double>>& entries,
                         double gamma0) {
  if (entries.empty()) return;
  if (gamma0 < 0.0 || gamma0 > static_cast<double>(entries.size())) {
    throw std::invalid_argument(
        "robustify_objective: gamma outside [0, |J_0|]");
  }
  VarId z0 = model.add_variable("z_obj", 0.0, kInf);
  model.add_objective_term(z0, gamma0);
  int sub = 0;
  for (const auto& [var, dev] : entries) {
    if (var < 0 || var >= model.num_vars()) {
      throw std::invalid_argument("robustify_objective: unknown variable");
    }
    if (dev < 0.0 || !std::isfinite(dev)) {
      throw std::invalid_argument("robustify_objective: negative deviation");
    }
    VarId proxy = var;
    if (model.var(var).lower < 0.0) {
      proxy = model.add_variable(tagged("y_obj", 0, sub), 0.0, kInf);
      model.add_constraint(tagged("abs_obj_pos", 0, sub),
                           {{var, 1.0}, {proxy, -1.0}}, RowSense::LessEqual,
                           0.0);
      model.add_constraint(tagged("abs_obj_neg", 0, sub),
                           {{var, -1.0}, {proxy, -1.0}}, RowSense::LessEqual,
                           0.0);
    }
    VarId p = model.add_variable(tagged("p_obj", 0, sub), 0.0, kInf);
    model.add_objective_term(p, 1.0);
    model.add_constraint(tagged("dual_obj", 0, sub),
                         {{z0, 1.0}, {p, 1.0}, {proxy, -dev}},
                         RowSense::GreaterEqual, 0.0);
    ++sub;
  }
}

BuildResult build_robust(const Instance& inst, const RobustConfig& cfg) {
  const int S = inst.dims.suppliers;
  const int V = inst.dims.vaccines;
  if (cfg.gamma < 0.0 || !std::isfinite(cfg.gamma)) {
    throw std::invalid_argument("build_robust: gamma must be >= 0");
  }
  if (cfg.deviation_fraction < 0.0 || !std::isfinite(cfg.deviation_fraction)) {
    throw std::invalid_argument("build_robust: deviation_fraction must be >= 0");
  }
  detail::RobustSpec spec;
  spec.gamma = effective_gamma(cfg.gamma);
  if (!cfg.maxorder_deviation.empty()) {
    if (cfg.maxorder_deviation.size() != static_cast<std::size_t>(S) * V) {
      throw std::invalid_argument(
          "build_robust: maxorder_deviation must have suppliers*vaccines "
          "entries");
    }
    spec.maxorder_dev = cfg.maxorder_deviation;
  } else {
    spec.maxorder_dev.resize(static_cast<std::size_t>(S) * V);
    for (int i = 0; i < S; ++i)
      for (int v = 0; v < V; ++v)
        spec.maxorder_dev[static_cast<std::size_t>(i) * V + v] =
            cfg.deviation_fraction * inst.suppliers[i].max_order[v];
  }
  if (!cfg.budget_deviation.empty()) {
    if (cfg.budget_deviation.size() != static_cast<std::size_t>(S)) {
      throw std::invalid_argument(
          "build_robust: budget_deviation must have one entry per supplier");
    }
    spec.budget_dev = cfg.budget_deviation;
  } else {
    spec.budget_dev.resize(S);
    for (int i = 0; i < S; ++i)
      spec.budget_dev[i] = cfg.deviation_fraction * inst.suppliers[i].budget;
  }
  for (double d : spec.maxorder_dev) {
    if (d < 0.0 || !std::isfinite(d)) {
      throw std::invalid_argument("build_robust: negative maxorder deviation");
    }
  }
  for (double d : spec.budget_dev) {
    if (d < 0.0 || !std::isfinite(d)) {
      throw std::invalid_argument("build_robust: negative budget deviation");
    }
  }
  return detail::build_model(inst, &spec);
}

}  // namespace coldchain
