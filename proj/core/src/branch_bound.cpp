#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <vector>

#include "coldchain/solver.hpp"
#include "simplex_engine.hpp"

namespace coldchain {

namespace {

using detail::LpResult;
using detail::LpStatus;
using detail::SimplexEngine;

struct Node {
  double bound = -kInf;
  long id = 0;
  int depth = 0;
  std::vector<std::pair<int, signed char>> fixes;  // (binary var id, 0/1)
};

struct BestBoundFirst {
  bool operator()(const std::shared_ptr<Node>& a,
                  const std::shared_ptr<Node>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->id > b->id;
  }
};

double relative_gap(double incumbent, double bound) {
  return (incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

}  // namespace

Solution solve_milp(const MilpModel& model, const SolveOptions& opts) {
  std::vector<int> binaries;
  for (const VarDef& v : model.variables()) {
    if (v.kind == VarKind::Binary) binaries.push_back(v.id);
  }
  if (binaries.empty()) return solve_lp(model, opts);

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  const int n = model.num_vars();
  std::vector<double> base_lb(n), base_ub(n);
  for (const VarDef& v : model.variables()) {
    base_lb[v.id] = v.lower;
    base_ub[v.id] = v.upper;
  }
  detail::tighten_bounds(model, base_lb, base_ub);

  SimplexEngine engine(model, opts.feas_tol);
  Solution result;
  result.status = SolveStatus::Error;

  bool have_incumbent = false;
  std::vector<double> inc_values;
  double inc_obj = kInf;
  long nodes = 0;
  long lp_iters = 0;
  bool warm = false;

  auto solve_node_lp = [&](const std::vector<std::pair<int, signed char>>& fixes,
                           const std::vector<std::pair<int, signed char>>*
                               extra) -> LpResult {
    std::vector<double> lb = base_lb, ub = base_ub;
    for (const auto& [var, val] : fixes) {
      lb[var] = std::max(lb[var], static_cast<double>(val));
      ub[var] = std::min(ub[var], static_cast<double>(val));
    }
    if (extra) {
      for (const auto& [var, val] : *extra) {
        lb[var] = std::max(lb[var], static_cast<double>(val));
        ub[var] = std::min(ub[var], static_cast<double>(val));
      }
    }
    LpResult r = engine.solve(lb, ub, warm);
    if (r.status == LpStatus::Singular || r.status == LpStatus::IterLimit) {
      r = engine.solve(lb, ub, false);  // cold retry, never a wrong answer
    }
    warm = true;
    lp_iters += r.iterations;
    return r;
  };

  auto try_incumbent = [&](const LpResult& r) {
    if (r.status != LpStatus::Optimal) return;
    if (!have_incumbent || r.obj < inc_obj - 1e-12) {
      have_incumbent = true;
      inc_obj = r.obj;
      inc_values = r.x;
    }
  };

  // Rounding heuristic: fix every binary at a rounded value and repair the
  // continuous part with one LP.
  auto rounding_heuristic =
      [&](const std::vector<std::pair<int, signed char>>& fixes,
          const std::vector<double>& x, bool ceil_mode) {
        std::vector<std::pair<int, signed char>> all;
        all.reserve(binaries.size());
        for (int b : binaries) {
          double f = x[b];
          signed char v;
          if (ceil_mode) {
            v = f > opts.int_tol ? 1 : 0;
          } else {
            v = f >= 0.5 ? 1 : 0;
          }
          all.push_back({b, v});
        }
        LpResult r = solve_node_lp(fixes, &all);
        try_incumbent(r);
      };

  auto fractional_binaries = [&](const std::vector<double>& x) {
    std::vector<int> out;
    for (int b : binaries) {
      double f = x[b] - std::floor(x[b]);
      if (std::min(f, 1.0 - f) > opts.int_tol) out.push_back(b);
    }
    return out;
  };

  auto pick_branch_var = [&](const std::vector<double>& x,
                             const std::vector<int>& frac) {
    if (opts.branch_rule == BranchRule::FirstIndex) return frac.front();
    int best = frac.front();
    double best_score = -1.0;
    int best_prio = 0;
    for (int b : frac) {
      double f = x[b] - std::floor(x[b]);
      // Weight fractionality by the objective coefficient: rounding up an
      // expensive indicator moves the bound the most.
      double score =
          std::min(f, 1.0 - f) * (1.0 + std::abs(model.objective_coefs()[b]));
      int prio = b < static_cast<int>(opts.branch_priority.size())
                     ? opts.branch_priority[b]
                     : 0;
      if (score > best_score + 1e-12 ||
          (score > best_score - 1e-12 && prio > best_prio)) {
        best = b;
        best_score = score;
        best_prio = prio;
      }
    }
    return best;
  };

  std::priority_queue<std::shared_ptr<Node>,
                      std::vector<std::shared_ptr<Node>>, BestBoundFirst>
      pq;
  std::vector<std::shared_ptr<Node>> stack;  // DepthFirst order
  long next_id = 0;
  auto push = [&](std::shared_ptr<Node> nd) {
    if (opts.node_order == NodeOrder::BestBound) {
      pq.push(std::move(nd));
    } else {
      stack.push_back(std::move(nd));
    }
  };
  auto open_bound = [&] {
    double b = kInf;
    if (opts.node_order == NodeOrder::BestBound) {
      if (!pq.empty()) b = pq.top()->bound;
    } else {
      for (const auto& nd : stack) b = std::min(b, nd->bound);
    }
    return b;
  };

  auto root = std::make_shared<Node>();
  root->id = next_id++;
  push(root);

  bool limit_hit = false;
  bool node_error = false;
  double global_bound = -kInf;

  while (true) {
    double ob = open_bound();
    if (have_incumbent) {
      global_bound = std::min(ob, inc_obj);
      if (relative_gap(inc_obj, global_bound) <= opts.mip_gap) break;
    } else if (ob == kInf) {
      break;  // exhausted without incumbent
    }
    if (opts.node_limit > 0 && nodes >= opts.node_limit) {
      limit_hit = true;
      break;
    }
    if (opts.time_limit > 0 && elapsed() > opts.time_limit) {
      limit_hit = true;
      break;
    }

    std::shared_ptr<Node> nd;
    if (opts.node_order == NodeOrder::BestBound) {
      nd = pq.top();
      pq.pop();
    } else {
      nd = stack.back();
      stack.pop_back();
    }
    if (have_incumbent &&
        nd->bound >= inc_obj - opts.mip_gap * std::max(1.0, std::abs(inc_obj))) {
      continue;  // pruned by bound
    }

    LpResult r = solve_node_lp(nd->fixes, nullptr);
    ++nodes;
    if (opts.log) {
      *opts.log << "node=" << nd->id << " depth=" << nd->depth
                << " status=" << static_cast<int>(r.status)
                << " bound=" << (r.status == LpStatus::Optimal ? r.obj : kInf)
                << " incumbent=" << (have_incumbent ? inc_obj : kInf)
                << " gap="
                << (have_incumbent
                        ? relative_gap(inc_obj, std::min(open_bound(), inc_obj))
                        : kInf)
                << "\n";
    }
    if (r.status == LpStatus::Infeasible) continue;
    if (r.status == LpStatus::Unbounded) {
      // Relaxation unbounded at the root means the MILP is unbounded or
      // infeasible; report unbounded only at the root, else keep searching.
      if (nd->depth == 0) {
        result.status = SolveStatus::Unbounded;
        result.nodes = nodes;
        result.lp_iterations = lp_iters;
        result.wall_time = elapsed();
        return result;
      }
      continue;
    }
    if (r.status != LpStatus::Optimal) {
      node_error = true;
      continue;
    }
    double node_bound = std::max(nd->bound, r.obj);
    if (have_incumbent &&
        node_bound >=
            inc_obj - opts.mip_gap * std::max(1.0, std::abs(inc_obj))) {
      continue;
    }

    std::vector<int> frac = fractional_binaries(r.x);
    if (frac.empty()) {
      try_incumbent(r);
      continue;
    }
    if (nd->depth == 0 ||
        (opts.heuristic_every > 0 && nodes % opts.heuristic_every == 0)) {
      rounding_heuristic(nd->fixes, r.x, true);
      rounding_heuristic(nd->fixes, r.x, false);
    }

    // Reduced-cost fixing: a nonbasic binary whose reduced cost alone pushes
    // the node bound past the incumbent can be pinned for the whole subtree.
    std::vector<std::pair<int, signed char>> rc_fixes;
    if (have_incumbent && !r.reduced.empty()) {
      double slack =
          inc_obj - opts.mip_gap * std::max(1.0, std::abs(inc_obj)) - r.obj;
      for (int b : binaries) {
        double xb = r.x[b];
        if (xb < opts.int_tol && r.reduced[b] > slack) {
          rc_fixes.push_back({b, 0});
        } else if (xb > 1.0 - opts.int_tol && -r.reduced[b] > slack) {
          rc_fixes.push_back({b, 1});
        }
      }
    }

    int bvar = pick_branch_var(r.x, frac);
    for (signed char val : {static_cast<signed char>(1),
                            static_cast<signed char>(0)}) {
      auto child = std::make_shared<Node>();
      child->bound = node_bound;
      child->depth = nd->depth + 1;
      child->fixes = nd->fixes;
      child->fixes.insert(child->fixes.end(), rc_fixes.begin(),
                          rc_fixes.end());
      child->fixes.push_back({bvar, val});
      child->id = next_id++;
      push(child);
    }
  }

  result.nodes = nodes;
  result.lp_iterations = lp_iters;
  result.wall_time = elapsed();
  if (have_incumbent) {
    result.values = inc_values;
    result.objective = inc_obj;
    result.bound = limit_hit || node_error
                       ? std::min(open_bound(), inc_obj)
                       : global_bound;
    if (result.bound == kInf || result.bound == -kInf) result.bound = inc_obj;
    result.gap = relative_gap(inc_obj, result.bound);
    if (!limit_hit && !node_error && result.gap <= opts.mip_gap) {
      result.status = SolveStatus::Optimal;
    } else {
      result.status = SolveStatus::FeasibleGap;
      if (limit_hit) result.message = "node or time limit reached";
      if (node_error) result.message = "some nodes failed numerically";
    }
  } else if (limit_hit) {
    result.status = SolveStatus::LimitHit;
    result.bound = open_bound() == kInf ? -kInf : open_bound();
    result.message = "limit reached before any incumbent";
  } else if (node_error) {
    result.status = SolveStatus::Error;
    result.message = "numerical failure during search";
  } else {
    result.status = SolveStatus::Infeasible;
  }
  return result;
}

Solution brute_force_binaries(const MilpModel& model, const SolveOptions& opts,
                              int max_binaries) {
  std::vector<int> binaries;
  for (const VarDef& v : model.variables()) {
    if (v.kind == VarKind::Binary) binaries.push_back(v.id);
  }
  const int nb = static_cast<int>(binaries.size());
  if (nb > max_binaries) {
    throw std::invalid_argument("brute_force_binaries: too many binaries (" +
                                std::to_string(nb) + ")");
  }
  auto t0 = std::chrono::steady_clock::now();

  const int n = model.num_vars();
  std::vector<double> base_lb(n), base_ub(n);
  for (const VarDef& v : model.variables()) {
    base_lb[v.id] = v.lower;
    base_ub[v.id] = v.upper;
  }
  detail::tighten_bounds(model, base_lb, base_ub);

  SimplexEngine engine(model, opts.feas_tol);
  Solution best;
  best.status = SolveStatus::Infeasible;
  bool any_unbounded = false;

  const std::uint64_t count = std::uint64_t{1} << nb;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::vector<double> lb = base_lb, ub = base_ub;
    bool consistent = true;
    for (int b = 0; b < nb; ++b) {
      double v = (mask >> b) & 1 ? 1.0 : 0.0;
      int var = binaries[b];
      lb[var] = std::max(lb[var], v);
      ub[var] = std::min(ub[var], v);
      if (lb[var] > ub[var]) consistent = false;
    }
    if (!consistent) continue;
    LpResult r = engine.solve(lb, ub, mask != 0);
    if (r.status == LpStatus::Singular || r.status == LpStatus::IterLimit) {
      r = engine.solve(lb, ub, false);
    }
    best.lp_iterations += r.iterations;
    ++best.nodes;
    if (r.status == LpStatus::Unbounded) any_unbounded = true;
    if (r.status != LpStatus::Optimal) continue;
    if (best.status != SolveStatus::Optimal || r.obj < best.objective) {
      best.status = SolveStatus::Optimal;
      best.objective = r.obj;
      best.values = r.x;
    }
  }
  if (any_unbounded) {
    best.status = SolveStatus::Unbounded;
    best.values.clear();
  }
  if (best.status == SolveStatus::Optimal) {
    best.bound = best.objective;
    best.gap = 0.0;
  }
  best.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return best;
}

}  // namespace coldchain
