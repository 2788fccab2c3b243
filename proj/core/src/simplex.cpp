#include <algorithm>
#include <cmath>
#include <limits>

#include "coldchain/solver.hpp"
#include "simplex_engine.hpp"

namespace coldchain {

namespace detail {

namespace {

// Power-of-two scale factors keep scaled coefficients bit-exact.
double pow2_scale(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
  double e = std::round(std::log2(s));
  e = std::clamp(e, -30.0, 30.0);
  return std::exp2(e);
}

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kDegenStep = 1e-10;
constexpr int kRefactorEvery = 200;
constexpr int kDegenLimit = 1000;

}  // namespace

SimplexEngine::SimplexEngine(const MilpModel& model, double feas_tol)
    : m_(model.num_rows()),
      n_(model.num_vars()),
      total_(model.num_rows() + model.num_vars()),
      feas_tol_(feas_tol),
      obj_constant_(model.objective_constant()) {
  max_iters_ = 20000 + 200L * m_;

  // Geometric-mean equilibration on the structural matrix.
  row_scale_.assign(m_, 1.0);
  col_scale_.assign(n_, 1.0);
  for (int pass = 0; pass < 3; ++pass) {
    for (const LinRow& r : model.rows()) {
      double lo = kInf, hi = 0.0;
      for (const LinTerm& t : r.terms) {
        double a = std::abs(t.coef) * col_scale_[t.var];
        lo = std::min(lo, a);
        hi = std::max(hi, a);
      }
      if (hi > 0.0) row_scale_[r.id] = pow2_scale(1.0 / std::sqrt(lo * hi));
    }
    std::vector<double> clo(n_, kInf), chi(n_, 0.0);
    for (const LinRow& r : model.rows()) {
      for (const LinTerm& t : r.terms) {
        double a = std::abs(t.coef) * row_scale_[r.id];
        clo[t.var] = std::min(clo[t.var], a);
        chi[t.var] = std::max(chi[t.var], a);
      }
    }
    for (int j = 0; j < n_; ++j) {
      if (chi[j] > 0.0) col_scale_[j] = pow2_scale(1.0 / std::sqrt(clo[j] * chi[j]));
    }
  }

  cols_.resize(n_);
  for (const LinRow& r : model.rows()) {
    for (const LinTerm& t : r.terms) {
      cols_[t.var].push_back(
          {r.id, t.coef * row_scale_[r.id] * col_scale_[t.var]});
    }
  }
  cost_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    cost_[j] = model.objective_coefs()[j] * col_scale_[j];
  }
  rhs_.resize(m_);
  slack_lb_.resize(m_);
  slack_ub_.resize(m_);
  for (const LinRow& r : model.rows()) {
    rhs_[r.id] = r.rhs * row_scale_[r.id];
    switch (r.sense) {
      case RowSense::LessEqual:
        slack_lb_[r.id] = 0.0;
        slack_ub_[r.id] = kInf;
        break;
      case RowSense::GreaterEqual:
        slack_lb_[r.id] = -kInf;
        slack_ub_[r.id] = 0.0;
        break;
      case RowSense::Equal:
        slack_lb_[r.id] = 0.0;
        slack_ub_[r.id] = 0.0;
        break;
    }
  }
}

bool SimplexEngine::refactorize() {
  binv_valid_ = false;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
  for (int p = 0; p < m_; ++p) {
    int col = basic_[p];
    if (col < n_) {
      for (const auto& [row, a] : cols_[col]) b(row, p) = a;
    } else {
      b(col - n_, p) = 1.0;
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
  binv_ = lu.inverse();
  if (!binv_.allFinite()) return false;
  if (m_ > 0) {
    // Cheap sanity probe on one column.
    int p = m_ / 2;
    Eigen::VectorXd e = b * binv_.col(p);
    e(p) -= 1.0;
    if (e.cwiseAbs().maxCoeff() > 1e-6) return false;
  }
  binv_valid_ = true;
  return true;
}

void SimplexEngine::compute_basic_values() {
  Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(rhs_.data(), m_);
  for (int j = 0; j < total_; ++j) {
    if (state_[j] == kBasic) continue;
    double x = vals_[j];
    if (x == 0.0) continue;
    if (j < n_) {
      for (const auto& [row, a] : cols_[j]) r(row) -= a * x;
    } else {
      r(j - n_) -= x;
    }
  }
  Eigen::VectorXd xb = binv_ * r;
  for (int p = 0; p < m_; ++p) vals_[basic_[p]] = xb(p);
}

double SimplexEngine::infeasibility(int* count) const {
  double total = 0.0;
  int c = 0;
  for (int p = 0; p < m_; ++p) {
    int col = basic_[p];
    double breach =
        std::max(lb_[col] - vals_[col], vals_[col] - ub_[col]);
    if (breach > feas_tol_) {
      total += breach;
      ++c;
    }
  }
  if (count) *count = c;
  return total;
}

LpResult SimplexEngine::solve(const std::vector<double>& lb_orig,
                              const std::vector<double>& ub_orig,
                              bool warm_start) {
  LpResult res;
  for (int j = 0; j < n_; ++j) {
    if (lb_orig[j] > ub_orig[j]) {
      res.status = LpStatus::Infeasible;
      res.message = "conflicting bounds";
      return res;
    }
  }
  lb_.resize(total_);
  ub_.resize(total_);
  for (int j = 0; j < n_; ++j) {
    lb_[j] = lb_orig[j] == -kInf ? -kInf : lb_orig[j] / col_scale_[j];
    ub_[j] = ub_orig[j] == kInf ? kInf : ub_orig[j] / col_scale_[j];
  }
  for (int i = 0; i < m_; ++i) {
    lb_[n_ + i] = slack_lb_[i];
    ub_[n_ + i] = slack_ub_[i];
  }

  auto reset_to_slack_basis = [&] {
    state_.assign(total_, kAtLower);
    vals_.assign(total_, 0.0);
    basic_.resize(m_);
    binv_ = Eigen::MatrixXd::Identity(m_, m_);
    binv_valid_ = true;
    for (int j = 0; j < n_; ++j) {
      if (lb_[j] > -kInf) {
        state_[j] = kAtLower;
        vals_[j] = lb_[j];
      } else if (ub_[j] < kInf) {
        state_[j] = kAtUpper;
        vals_[j] = ub_[j];
      } else {
        state_[j] = kAtLower;  // free variable parked at zero
        vals_[j] = 0.0;
      }
    }
    for (int i = 0; i < m_; ++i) {
      basic_[i] = n_ + i;
      state_[n_ + i] = kBasic;
    }
  };

  if (!warm_start || !have_basis_ ||
      static_cast<int>(basic_.size()) != m_) {
    reset_to_slack_basis();
  } else {
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == kBasic) continue;
      bool free_var = lb_[j] == -kInf && ub_[j] == kInf;
      if (free_var) {
        vals_[j] = 0.0;
      } else if (state_[j] == kAtLower) {
        if (lb_[j] > -kInf) {
          vals_[j] = lb_[j];
        } else {
          state_[j] = kAtUpper;
          vals_[j] = ub_[j];
        }
      } else {
        if (ub_[j] < kInf) {
          vals_[j] = ub_[j];
        } else {
          state_[j] = kAtLower;
          vals_[j] = lb_[j];
        }
      }
    }
  }

  // The warm-start basis inverse is still valid when only bounds changed;
  // rebuild it only when missing or previously flagged stale.
  if (!binv_valid_ && !refactorize()) {
    reset_to_slack_basis();
  }
  compute_basic_values();
  have_basis_ = true;

  Eigen::VectorXd cb(m_), y(m_), w(m_);
  long iter = 0;
  int pivots_since_refactor = 0;
  int degen_streak = 0;
  int singular_retries = 0;
  bool bland = false;

  auto finish_point = [&](LpStatus st) {
    // Refresh the inverse only when enough eta updates accumulated; warm
    // restarts in branch and bound finish in a few pivots.
    if (pivots_since_refactor >= 64) {
      pivots_since_refactor = 0;
      refactorize();
    }
    compute_basic_values();
    res.status = st;
    res.iterations = iter;
    res.x.resize(n_);
    double obj = obj_constant_;
    for (int j = 0; j < n_; ++j) {
      res.x[j] = vals_[j] * col_scale_[j];
      obj += cost_[j] * vals_[j];
    }
    res.obj = obj;
    if (st == LpStatus::Optimal) {
      for (int p = 0; p < m_; ++p) {
        int col = basic_[p];
        cb(p) = col < n_ ? cost_[col] : 0.0;
      }
      y = binv_.transpose() * cb;
      double dual = obj_constant_;
      for (int i = 0; i < m_; ++i) dual += y(i) * rhs_[i];
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == kBasic || vals_[j] == 0.0) continue;
        double d = (j < n_ ? cost_[j] : 0.0);
        if (j < n_) {
          for (const auto& [row, a] : cols_[j]) d -= y(row) * a;
        } else {
          d -= y(j - n_);
        }
        dual += d * vals_[j];
      }
      res.dual_obj = dual;
      res.reduced.assign(n_, 0.0);
      for (int j = 0; j < n_; ++j) {
        if (state_[j] == kBasic) continue;
        double d = cost_[j];
        for (const auto& [row, a] : cols_[j]) d -= y(row) * a;
        res.reduced[j] = d / col_scale_[j];
      }
    }
    return res;
  };

  while (true) {
    if (iter >= max_iters_) {
      return finish_point(LpStatus::IterLimit);
    }
    int infeas_count = 0;
    infeasibility(&infeas_count);
    bool phase1 = infeas_count > 0;

    for (int p = 0; p < m_; ++p) {
      int col = basic_[p];
      if (phase1) {
        if (vals_[col] < lb_[col] - feas_tol_) {
          cb(p) = -1.0;
        } else if (vals_[col] > ub_[col] + feas_tol_) {
          cb(p) = 1.0;
        } else {
          cb(p) = 0.0;
        }
      } else {
        cb(p) = col < n_ ? cost_[col] : 0.0;
      }
    }
    y = binv_.transpose() * cb;

    int enter = -1;
    int dir = 0;
    double best_score = kCostTol;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == kBasic) continue;
      double d = (!phase1 && j < n_) ? cost_[j] : 0.0;
      if (j < n_) {
        for (const auto& [row, a] : cols_[j]) d -= y(row) * a;
      } else {
        d -= y(j - n_);
      }
      bool free_var = lb_[j] == -kInf && ub_[j] == kInf;
      int cand_dir = 0;
      double score = 0.0;
      if ((state_[j] == kAtLower || free_var) && d < -best_score) {
        cand_dir = 1;
        score = -d;
      }
      if ((state_[j] == kAtUpper || free_var) && d > best_score &&
          d > score) {
        cand_dir = -1;
        score = d;
      }
      if (cand_dir == 0) continue;
      if (bland) {
        enter = j;
        dir = cand_dir;
        break;
      }
      if (score > best_score) {
        best_score = score;
        enter = j;
        dir = cand_dir;
      }
    }

    if (enter < 0) {
      if (!phase1) return finish_point(LpStatus::Optimal);
      // Phase-1 optimum with residual infeasibility.
      double total_breach = infeasibility(nullptr);
      if (total_breach <= 100.0 * feas_tol_) {
        // Within tolerance; accept and continue as feasible.
        for (int p = 0; p < m_; ++p) {
          int col = basic_[p];
          vals_[col] = std::clamp(vals_[col], lb_[col], ub_[col]);
        }
        continue;
      }
      return finish_point(LpStatus::Infeasible);
    }

    // FTRAN
    if (enter < n_) {
      w.setZero();
      for (const auto& [row, a] : cols_[enter]) w += a * binv_.col(row);
    } else {
      w = binv_.col(enter - n_);
    }

    // Ratio test.
    double own_range = ub_[enter] - lb_[enter];  // may be inf
    double step = own_range;
    int leave_p = -1;
    bool leave_at_upper = false;
    double leave_w = 0.0;
    for (int p = 0; p < m_; ++p) {
      double wp = w(p);
      if (std::abs(wp) <= kPivotTol) continue;
      int col = basic_[p];
      double rate = -dir * wp;  // d(x_basic)/d(step)
      double xb = vals_[col];
      double cand = kInf;
      bool at_upper = false;
      if (xb < lb_[col] - feas_tol_) {
        if (rate > 0) {
          cand = (lb_[col] - xb) / rate;
          at_upper = false;
        }
      } else if (xb > ub_[col] + feas_tol_) {
        if (rate < 0) {
          cand = (ub_[col] - xb) / rate;
          at_upper = true;
        }
      } else if (rate > 0) {
        if (ub_[col] < kInf) {
          cand = (ub_[col] - xb) / rate;
          at_upper = true;
        }
      } else {
        if (lb_[col] > -kInf) {
          cand = (lb_[col] - xb) / rate;
          at_upper = false;
        }
      }
      if (cand == kInf) continue;
      cand = std::max(cand, 0.0);
      bool better;
      if (cand < step - 1e-12) {
        better = true;
      } else if (cand <= step + 1e-12 && leave_p >= 0) {
        better = bland ? col < basic_[leave_p]
                       : std::abs(wp) > std::abs(leave_w);
      } else {
        better = leave_p < 0 && cand <= step;
      }
      if (better) {
        step = std::min(step, cand);
        leave_p = p;
        leave_at_upper = at_upper;
        leave_w = wp;
      }
    }

    if (step == kInf && leave_p < 0) {
      if (!phase1) return finish_point(LpStatus::Unbounded);
      // Numerical breakdown: an infeasible basic should have blocked.
      if (++singular_retries <= 2 && refactorize()) {
        compute_basic_values();
        ++iter;
        continue;
      }
      return finish_point(LpStatus::Infeasible);
    }

    // Apply the step.
    for (int p = 0; p < m_; ++p) {
      double wp = w(p);
      if (wp != 0.0) vals_[basic_[p]] -= dir * step * wp;
    }
    if (leave_p < 0 || (own_range <= step && own_range < kInf)) {
      // Bound flip of the entering variable.
      state_[enter] = dir > 0 ? kAtUpper : kAtLower;
      vals_[enter] = dir > 0 ? ub_[enter] : lb_[enter];
    } else {
      vals_[enter] += dir * step;
      int out = basic_[leave_p];
      state_[out] = leave_at_upper ? kAtUpper : kAtLower;
      vals_[out] = leave_at_upper ? ub_[out] : lb_[out];
      basic_[leave_p] = enter;
      state_[enter] = kBasic;
      double piv = w(leave_p);
      Eigen::RowVectorXd r = binv_.row(leave_p) / piv;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_p) continue;
        double wi = w(i);
        if (wi != 0.0) binv_.row(i) -= wi * r;
      }
      binv_.row(leave_p) = r;
      if (++pivots_since_refactor >= kRefactorEvery) {
        pivots_since_refactor = 0;
        if (!refactorize()) {
          reset_to_slack_basis();
          refactorize();
        }
        compute_basic_values();
      }
    }

    if (step <= kDegenStep) {
      if (++degen_streak > kDegenLimit) bland = true;
    } else {
      degen_streak = 0;
      bland = false;
    }
    ++iter;
  }
}

}  // namespace detail

namespace detail {

// Singleton-row bound tightening; keeps the rows, only sharpens the boxes.
void tighten_bounds(const MilpModel& model, std::vector<double>& lb,
                    std::vector<double>& ub) {
  for (const LinRow& r : model.rows()) {
    if (r.terms.size() != 1) continue;
    const LinTerm& t = r.terms[0];
    double v = r.rhs / t.coef;
    bool upper_cap = (r.sense == RowSense::LessEqual) == (t.coef > 0.0);
    if (r.sense == RowSense::Equal) {
      lb[t.var] = std::max(lb[t.var], v);
      ub[t.var] = std::min(ub[t.var], v);
    } else if (upper_cap) {
      ub[t.var] = std::min(ub[t.var], v);
    } else {
      lb[t.var] = std::max(lb[t.var], v);
    }
  }
}

}  // namespace detail

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleGap: return "feasible-gap";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::LimitHit: return "limit-hit";
    case SolveStatus::Error: return "error";
  }
  return "unknown";
}

Solution solve_lp(const MilpModel& model, const SolveOptions& opts) {
  detail::SimplexEngine engine(model, opts.feas_tol);
  std::vector<double> lb(model.num_vars()), ub(model.num_vars());
  for (const VarDef& v : model.variables()) {
    lb[v.id] = v.lower;
    ub[v.id] = v.upper;
  }
  detail::tighten_bounds(model, lb, ub);
  detail::LpResult r = engine.solve(lb, ub, false);
  Solution sol;
  sol.lp_iterations = r.iterations;
  sol.message = r.message;
  switch (r.status) {
    case detail::LpStatus::Optimal:
      sol.status = SolveStatus::Optimal;
      sol.values = std::move(r.x);
      sol.objective = r.obj;
      sol.bound = r.dual_obj;
      sol.gap = 0.0;
      break;
    case detail::LpStatus::Infeasible:
      sol.status = SolveStatus::Infeasible;
      break;
    case detail::LpStatus::Unbounded:
      sol.status = SolveStatus::Unbounded;
      break;
    case detail::LpStatus::IterLimit:
      sol.status = SolveStatus::LimitHit;
      sol.message = "simplex iteration limit";
      break;
    case detail::LpStatus::Singular:
      sol.status = SolveStatus::Error;
      break;
  }
  return sol;
}

ValidationReport check_solution(const MilpModel& model, const Solution& sol,
                                double tol) {
  ValidationReport rep;
  rep.eval = model.evaluate(sol.values, tol);
  return rep;
}

}  // namespace coldchain
