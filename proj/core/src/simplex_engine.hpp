#pragma once

#include <vector>

#include <Eigen/Dense>

#include "coldchain/milp.hpp"

namespace coldchain::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit, Singular };

struct LpResult {
  LpStatus status = LpStatus::Singular;
  std::vector<double> x;  // structural variable values, original units
  double obj = 0.0;       // includes the model's objective constant
  double dual_obj = 0.0;  // recomputed from (y, reduced costs) at optimality
  // Structural reduced costs in original units, filled at optimality; valid
  // per-unit underestimates of the objective change when a nonbasic variable
  // moves off its bound.
  std::vector<double> reduced;
  long iterations = 0;
  std::string message;
};

/// Bounded-variable primal simplex with composite phase 1, geometric-mean
/// scaling, a dense updated basis inverse and Bland anti-cycling fallback.
/// One engine instance is bound to one model; per-solve bound overrides allow
/// branch-and-bound to reuse the scaled data and warm-start from the last
/// basis.
class SimplexEngine {
 public:
  SimplexEngine(const MilpModel& model, double feas_tol);

  // lb/ub are per-structural-variable overrides in original units; pass the
  // model bounds (binaries relaxed) via model_bounds() when unmodified.
  LpResult solve(const std::vector<double>& lb, const std::vector<double>& ub,
                 bool warm_start);

  int num_rows() const { return m_; }

 private:
  enum State : unsigned char { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

  bool refactorize();
  void compute_basic_values();
  double infeasibility(int* count = nullptr) const;

  int m_ = 0;  // rows
  int n_ = 0;  // structural columns
  int total_ = 0;  // n_ + m_ (slacks appended)
  double feas_tol_;
  long max_iters_;

  // Scaled static data.
  std::vector<std::vector<std::pair<int, double>>> cols_;  // structural, scaled
  std::vector<double> cost_;        // scaled structural costs (slacks are 0)
  std::vector<double> rhs_;         // scaled
  std::vector<double> row_scale_;
  std::vector<double> col_scale_;
  std::vector<double> slack_lb_, slack_ub_;  // from row senses
  double obj_constant_ = 0.0;

  // Per-solve state (kept across calls for warm starts).
  std::vector<double> lb_, ub_;  // scaled bounds, all columns
  std::vector<double> vals_;     // all columns, scaled
  std::vector<unsigned char> state_;
  std::vector<int> basic_;
  Eigen::MatrixXd binv_;
  bool binv_valid_ = false;  // binv_ matches basic_
  bool have_basis_ = false;
};

/// Singleton-row bound tightening (the only presolve applied); rows stay in
/// the model, only variable boxes sharpen.
void tighten_bounds(const MilpModel& model, std::vector<double>& lb,
                    std::vector<double>& ub);

}  // namespace coldchain::detail
