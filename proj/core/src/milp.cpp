#include "coldchain/milp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace coldchain {

namespace {

std::vector<LinTerm> merge_terms(std::vector<LinTerm> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const LinTerm& a, const LinTerm& b) { return a.var < b.var; });
  std::vector<LinTerm> out;
  out.reserve(terms.size());
  for (const LinTerm& t : terms) {
    if (!out.empty() && out.back().var == t.var) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const LinTerm& t) { return t.coef == 0.0; }),
            out.end());
  return out;
}

}  // namespace

VarId MilpModel::add_variable(const std::string& name, double lower,
                              double upper, VarKind kind) {
  if (var_names_.count(name)) {
    throw std::invalid_argument("duplicate variable name: " + name);
  }
  if (!(lower <= upper)) {
    throw std::invalid_argument("inverted bounds for variable " + name);
  }
  if (kind == VarKind::Binary && (lower < 0.0 || upper > 1.0)) {
    throw std::invalid_argument("binary variable " + name +
                                " must have bounds within [0,1]");
  }
  if (std::isnan(lower) || std::isnan(upper)) {
    throw std::invalid_argument("NaN bound for variable " + name);
  }
  VarId id = static_cast<VarId>(vars_.size());
  vars_.push_back(VarDef{id, name, lower, upper, kind});
  obj_.push_back(0.0);
  var_names_.emplace(name, id);
  if (kind == VarKind::Binary) ++num_binaries_;
  return id;
}

RowId MilpModel::add_constraint(const std::string& name,
                                std::vector<LinTerm> terms, RowSense sense,
                                double rhs) {
  if (row_names_.count(name)) {
    throw std::invalid_argument("duplicate row name: " + name);
  }
  for (const LinTerm& t : terms) {
    if (t.var < 0 || t.var >= num_vars()) {
      throw std::invalid_argument("row " + name +
                                  " references undefined variable id " +
                                  std::to_string(t.var));
    }
    if (!std::isfinite(t.coef)) {
      throw std::invalid_argument("row " + name + " has non-finite coefficient");
    }
  }
  RowId id = static_cast<RowId>(rows_.size());
  rows_.push_back(LinRow{id, name, merge_terms(std::move(terms)), sense, rhs});
  row_names_.emplace(name, id);
  return id;
}

void MilpModel::add_row_terms(RowId row, const std::vector<LinTerm>& terms) {
  if (row < 0 || row >= num_rows()) {
    throw std::invalid_argument("unknown row id " + std::to_string(row));
  }
  for (const LinTerm& t : terms) {
    if (t.var < 0 || t.var >= num_vars()) {
      throw std::invalid_argument("add_row_terms: undefined variable id " +
                                  std::to_string(t.var));
    }
  }
  LinRow& r = rows_[row];
  r.terms.insert(r.terms.end(), terms.begin(), terms.end());
  r.terms = merge_terms(std::move(r.terms));
}

void MilpModel::set_row_rhs(RowId row, double rhs) {
  if (row < 0 || row >= num_rows()) {
    throw std::invalid_argument("unknown row id " + std::to_string(row));
  }
  rows_[row].rhs = rhs;
}

void MilpModel::add_objective_term(VarId var, double coef) {
  if (var < 0 || var >= num_vars()) {
    throw std::invalid_argument("objective references undefined variable id " +
                                std::to_string(var));
  }
  obj_[var] += coef;
}

VarId MilpModel::find_variable(const std::string& name) const {
  auto it = var_names_.find(name);
  return it == var_names_.end() ? -1 : it->second;
}

double MilpModel::objective_value(const std::vector<double>& assignment) const {
  if (static_cast<int>(assignment.size()) != num_vars()) {
    throw std::invalid_argument("assignment does not cover all variables");
  }
  double z = obj_constant_;
  for (int j = 0; j < num_vars(); ++j) z += obj_[j] * assignment[j];
  return z;
}

EvalReport MilpModel::evaluate(const std::vector<double>& assignment,
                               double tol) const {
  if (static_cast<int>(assignment.size()) != num_vars()) {
    throw std::invalid_argument("assignment does not cover all variables");
  }
  EvalReport rep;
  rep.objective = objective_value(assignment);
  for (const VarDef& v : vars_) {
    double x = assignment[v.id];
    double breach = std::max(v.lower - x, x - v.upper);
    if (breach > tol) {
      rep.bound_violations.push_back(v.id);
      rep.max_violation = std::max(rep.max_violation, breach);
    }
    if (v.kind == VarKind::Binary && std::abs(x - std::round(x)) > tol) {
      rep.integrality_violations.push_back(v.id);
      rep.max_violation =
          std::max(rep.max_violation, std::abs(x - std::round(x)));
    }
  }
  for (const LinRow& r : rows_) {
    double act = 0.0;
    for (const LinTerm& t : r.terms) act += t.coef * assignment[t.var];
    double slack = 0.0;
    bool bad = false;
    switch (r.sense) {
      case RowSense::LessEqual:
        slack = r.rhs - act;
        bad = slack < -tol;
        break;
      case RowSense::GreaterEqual:
        slack = act - r.rhs;
        bad = slack < -tol;
        break;
      case RowSense::Equal:
        slack = r.rhs - act;
        bad = std::abs(slack) > tol;
        break;
    }
    if (bad) {
      rep.violated_rows.push_back(RowEval{r.id, act, slack});
      rep.max_violation = std::max(rep.max_violation, std::abs(slack));
    }
  }
  return rep;
}

void write_mps(const MilpModel& model, std::ostream& os,
               const std::string& name) {
  os << "NAME " << name << "\n";
  os << "ROWS\n";
  os << " N OBJ\n";
  for (const LinRow& r : model.rows()) {
    char s = r.sense == RowSense::LessEqual  ? 'L'
             : r.sense == RowSense::Equal    ? 'E'
                                             : 'G';
    os << " " << s << " " << r.name << "\n";
  }
  // Column-major: collect row entries per variable.
  std::vector<std::vector<std::pair<const std::string*, double>>> cols(
      model.num_vars());
  for (const LinRow& r : model.rows()) {
    for (const LinTerm& t : r.terms) cols[t.var].push_back({&r.name, t.coef});
  }
  os << "COLUMNS\n";
  os.precision(17);
  bool in_int = false;
  for (const VarDef& v : model.variables()) {
    bool want_int = v.kind == VarKind::Binary;
    if (want_int != in_int) {
      os << " MARKER M" << v.id << " 'MARKER' "
         << (want_int ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = want_int;
    }
    double c = model.objective_coefs()[v.id];
    if (c != 0.0) os << " " << v.name << " OBJ " << c << "\n";
    for (const auto& [rname, coef] : cols[v.id]) {
      os << " " << v.name << " " << *rname << " " << coef << "\n";
    }
  }
  if (in_int) os << " MARKER MEND 'MARKER' 'INTEND'\n";
  os << "RHS\n";
  for (const LinRow& r : model.rows()) {
    if (r.rhs != 0.0) os << " RHS " << r.name << " " << r.rhs << "\n";
  }
  if (model.objective_constant() != 0.0) {
    os << " RHS OBJ " << -model.objective_constant() << "\n";
  }
  os << "BOUNDS\n";
  for (const VarDef& v : model.variables()) {
    if (v.kind == VarKind::Binary && v.lower == 0.0 && v.upper == 1.0) {
      os << " BV BND " << v.name << "\n";
      continue;
    }
    if (v.lower == v.upper) {
      os << " FX BND " << v.name << " " << v.lower << "\n";
      continue;
    }
    if (v.lower == -kInf) {
      os << " MI BND " << v.name << "\n";
    } else if (v.lower != 0.0) {
      os << " LO BND " << v.name << " " << v.lower << "\n";
    }
    if (v.upper != kInf) {
      os << " UP BND " << v.name << " " << v.upper << "\n";
    }
  }
  os << "ENDATA\n";
}

}  // namespace coldchain
