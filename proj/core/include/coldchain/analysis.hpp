#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coldchain/instance.hpp"
#include "coldchain/solver.hpp"

namespace coldchain {

enum class Direction { Decreased, Unchanged, Increased };
const char* to_string(Direction d);

struct PerturbationScenario {
  Direction budget = Direction::Unchanged;
  Direction maxorder = Direction::Unchanged;
  double magnitude = 0.10;
};

/// The 8 Table-4 scenarios in report order: both directions cycle
/// increased -> unchanged -> decreased, the all-unchanged combination removed.
std::vector<PerturbationScenario> scenario_grid(double magnitude);

struct ReportRow {
  std::string label;
  SolveStatus status = SolveStatus::Error;
  double holding = 0.0;      // P1
  double transport = 0.0;    // P2
  double deprivation = 0.0;  // P3
  double objective = 0.0;    // Z
  double pct_change = 0.0;   // vs baseline row, percent
  double wall_time = 0.0;    // kept in memory only; never emitted
  bool relaxed_service = false;  // re-solved with the service floor dropped
  std::string note;
};

struct SensitivityReport {
  std::string kind;  // ladder | scenarios | budget_sweep | gamma_sweep
  std::vector<ReportRow> rows;
  // Qualitative flags over the rows that solved to optimality.
  bool extremes_ok = false;            // scenarios: min at (inc,inc), max at (dec,dec)
  bool objective_trend_ok = false;     // sweep: Z non-decreasing with the cut
  bool deprivation_trend_ok = false;   // sweep: P3 non-decreasing
  bool objective_monotone = false;     // ladder / gamma sweep: Z non-decreasing
  bool growth_ratio_declines = false;  // ladder: P3 growth ratios non-increasing
};

struct AnalysisOptions {
  SolveOptions solve;
  bool use_robust = false;  // solve the robust counterpart of each model
  RobustConfig robust;
  // When a sweep level is infeasible, re-solve it with the service floor set
  // to zero and mark the row instead of just flagging it.
  bool relax_service_on_infeasible = false;
};

/// Solves one instance (robust counterpart when requested) and decomposes the
/// optimum into P1/P2/P3. The workhorse behind every report row.
ReportRow solve_and_decompose(const Instance& inst, const std::string& label,
                              const AnalysisOptions& opts);

SensitivityReport run_ladder(const std::vector<int>& presets,
                             std::uint64_t seed, const AnalysisOptions& opts);

/// Ladder over explicit instances (one row per rung, in order).
SensitivityReport run_ladder(const std::vector<Instance>& rungs,
                             const std::vector<std::string>& labels,
                             const AnalysisOptions& opts);

SensitivityReport run_budget_order_sensitivity(const Instance& inst,
                                               double magnitude,
                                               const AnalysisOptions& opts);

inline const std::vector<double>& default_sweep_fractions() {
  static const std::vector<double> f{0.05, 0.10, 0.15, 0.20,
                                     0.25, 0.30, 0.40, 0.50};
  return f;
}

SensitivityReport run_budget_sweep(const Instance& inst,
                                   const std::vector<double>& fractions,
                                   const AnalysisOptions& opts);

SensitivityReport gamma_sweep(const Instance& inst,
                              const std::vector<double>& gammas,
                              double deviation_fraction,
                              const AnalysisOptions& opts);

enum class ReportFormat { Csv, StructuredText };

std::string report_to_csv(const SensitivityReport& report);
std::string report_to_text(const SensitivityReport& report);  // JSON
std::string report_plot_data(const SensitivityReport& report);

/// Writes the report plus a companion plot-data file at path + ".plot.csv"
/// (x = row label, y = deprivation cost). Output is byte-deterministic for a
/// fixed instance/seed/options.
void emit_report(const SensitivityReport& report, ReportFormat format,
                 const std::string& path);

}  // namespace coldchain
