#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace coldchain {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using VarId = int;
using RowId = int;

enum class VarKind { Continuous, Binary };
enum class RowSense { LessEqual, Equal, GreaterEqual };

struct VarDef {
  VarId id = -1;
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  VarKind kind = VarKind::Continuous;
};

struct LinTerm {
  VarId var = -1;
  double coef = 0.0;
};

struct LinRow {
  RowId id = -1;
  std::string name;
  std::vector<LinTerm> terms;  // sorted by var id, no duplicates, no zeros
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

struct RowEval {
  RowId row = -1;
  double activity = 0.0;
  double slack = 0.0;  // signed; negative means the row is breached
};

struct EvalReport {
  double objective = 0.0;
  std::vector<RowEval> violated_rows;
  std::vector<VarId> bound_violations;
  std::vector<VarId> integrality_violations;
  double max_violation = 0.0;

  bool feasible() const {
    return violated_rows.empty() && bound_violations.empty() &&
           integrality_violations.empty();
  }
};

/// Sparse minimization MILP shared by the builder, the robust transformer and
/// the solver. Construction is single-writer; once built the model is treated
/// as immutable by all consumers.
class MilpModel {
 public:
  VarId add_variable(const std::string& name, double lower, double upper,
                     VarKind kind = VarKind::Continuous);
  RowId add_constraint(const std::string& name, std::vector<LinTerm> terms,
                       RowSense sense, double rhs);

  // In-place row edits used by the robust transformer. Duplicate coefficients
  // merge by summation, zeros are dropped.
  void add_row_terms(RowId row, const std::vector<LinTerm>& terms);
  void set_row_rhs(RowId row, double rhs);

  void add_objective_term(VarId var, double coef);
  void set_objective_constant(double c) { obj_constant_ = c; }

  EvalReport evaluate(const std::vector<double>& assignment, double tol) const;
  double objective_value(const std::vector<double>& assignment) const;

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_binaries() const { return num_binaries_; }

  const VarDef& var(VarId id) const { return vars_.at(id); }
  const LinRow& row(RowId id) const { return rows_.at(id); }
  const std::vector<VarDef>& variables() const { return vars_; }
  const std::vector<LinRow>& rows() const { return rows_; }
  const std::vector<double>& objective_coefs() const { return obj_; }
  double objective_constant() const { return obj_constant_; }

  VarId find_variable(const std::string& name) const;

 private:
  std::vector<VarDef> vars_;
  std::vector<LinRow> rows_;
  std::vector<double> obj_;  // dense by VarId; zeros mean "not in objective"
  double obj_constant_ = 0.0;
  int num_binaries_ = 0;
  std::unordered_map<std::string, VarId> var_names_;
  std::unordered_map<std::string, RowId> row_names_;
};

/// Free-format MPS dump (ROWS / COLUMNS / RHS / BOUNDS sections, binaries in
/// INTORG markers) for cross-checking against external solvers.
void write_mps(const MilpModel& model, std::ostream& os,
               const std::string& name = "COLDCHAIN");

}  // namespace coldchain
