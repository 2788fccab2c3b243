#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "coldchain/analysis.hpp"
#include "coldchain/builder.hpp"
#include "coldchain/instance.hpp"
#include "coldchain/robust.hpp"
#include "coldchain/solver.hpp"

namespace {

using coldchain::AnalysisOptions;
using coldchain::Instance;
using coldchain::SolveStatus;
using nlohmann::ordered_json;

constexpr const char* kSolutionSchema = "coldchain-solution/1";

struct SourceOpts {
  std::string instance_path;
  int preset = 0;
  std::string shape;  // "T,J,K,V[,A]"
  std::uint64_t seed = 42;
};

struct RobustOpts {
  bool enabled = false;
  double gamma = 1.0;
  double deviation = 0.1;
};

struct SolverOpts {
  double mip_gap = 1e-6;
  long node_limit = 0;
  double time_limit = 0.0;
  bool depth_first = false;
  bool first_index = false;
  bool log_nodes = false;
};

void add_source_flags(CLI::App* cmd, SourceOpts& src) {
  auto* inst = cmd->add_option("--instance", src.instance_path,
                               "Instance JSON file to load");
  auto* preset =
      cmd->add_option("--preset", src.preset, "Generate a preset instance")
          ->check(CLI::Range(1, coldchain::kNumPresets));
  auto* shape = cmd->add_option(
      "--shape", src.shape,
      "Generate a custom shape: periods,dcs,vcs,vaccines[,age_groups]");
  cmd->add_option("--seed", src.seed,
                  "Generator seed (with --preset or --shape)");
  inst->excludes(preset)->excludes(shape);
  preset->excludes(inst)->excludes(shape);
  shape->excludes(inst)->excludes(preset);
}

void add_robust_flags(CLI::App* cmd, RobustOpts& rob) {
  cmd->add_flag("--robust", rob.enabled, "Solve the robust counterpart");
  cmd->add_option("--gamma", rob.gamma,
                  "Budget of uncertainty (implies --robust)");
  cmd->add_option("--deviation", rob.deviation,
                  "Deviation as a fraction of nominal values")
      ->check(CLI::NonNegativeNumber);
}

void add_solver_flags(CLI::App* cmd, SolverOpts& so) {
  cmd->add_option("--mip-gap", so.mip_gap, "Relative MIP gap target");
  cmd->add_option("--node-limit", so.node_limit, "Node limit (0 = unlimited)");
  cmd->add_option("--time-limit", so.time_limit,
                  "Wall-time limit in seconds (0 = unlimited)");
  cmd->add_flag("--depth-first", so.depth_first,
                "Depth-first node order instead of best-bound");
  cmd->add_flag("--first-index", so.first_index,
                "First-index branching instead of most-fractional");
  cmd->add_flag("--log-nodes", so.log_nodes, "Per-node log lines on stderr");
}

coldchain::SolveOptions to_solve_options(const SolverOpts& so) {
  coldchain::SolveOptions out;
  out.mip_gap = so.mip_gap;
  out.node_limit = so.node_limit;
  out.time_limit = so.time_limit;
  out.node_order = so.depth_first ? coldchain::NodeOrder::DepthFirst
                                  : coldchain::NodeOrder::BestBound;
  out.branch_rule = so.first_index ? coldchain::BranchRule::FirstIndex
                                   : coldchain::BranchRule::MostFractional;
  if (so.log_nodes) out.log = &std::cerr;
  return out;
}

coldchain::Dimensions parse_shape(const std::string& text) {
  std::vector<int> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError("bad --shape value: " + item);
    }
  }
  if (vals.size() != 4 && vals.size() != 5) {
    throw CLI::ValidationError(
        "--shape needs periods,dcs,vcs,vaccines[,age_groups]");
  }
  coldchain::Dimensions d;
  d.periods = vals[0];
  d.dcs = vals[1];
  d.vcs = vals[2];
  d.vaccines = vals[3];
  if (vals.size() == 5) d.age_groups = vals[4];
  for (int v : {d.periods, d.dcs, d.vcs, d.vaccines, d.age_groups}) {
    if (v < 1) throw CLI::ValidationError("--shape entries must be >= 1");
  }
  return d;
}

Instance resolve_instance(const SourceOpts& src) {
  if (!src.instance_path.empty())
    return coldchain::load_instance(src.instance_path);
  if (!src.shape.empty())
    return coldchain::generate_instance(parse_shape(src.shape), src.seed);
  if (src.preset > 0) return coldchain::generate_instance(src.preset, src.seed);
  throw CLI::ValidationError(
      "one of --instance, --preset or --shape is required");
}

std::string default_output_dir() {
  const char* dir = std::getenv("COLDCHAIN_OUTPUT_DIR");
  return dir ? dir : ".";
}

std::string resolve_output(const std::string& given,
                           const std::string& fallback_name) {
  if (!given.empty()) return given;
  return default_output_dir() + "/" + fallback_name;
}

ordered_json source_config(const SourceOpts& src) {
  ordered_json j;
  if (!src.instance_path.empty()) {
    j["instance"] = src.instance_path;
  } else if (!src.shape.empty()) {
    j["shape"] = src.shape;
    j["seed"] = src.seed;
  } else {
    j["preset"] = src.preset;
    j["seed"] = src.seed;
  }
  return j;
}

ordered_json robust_config(const RobustOpts& rob) {
  ordered_json j;
  j["robust"] = rob.enabled;
  if (rob.enabled) {
    j["gamma"] = coldchain::effective_gamma(rob.gamma);
    j["deviation"] = rob.deviation;
  }
  return j;
}

ordered_json solver_config(const SolverOpts& so) {
  ordered_json j;
  j["mip_gap"] = so.mip_gap;
  j["node_limit"] = so.node_limit;
  j["time_limit"] = so.time_limit;
  j["node_order"] = so.depth_first ? "depth-first" : "best-bound";
  j["branch_rule"] = so.first_index ? "first-index" : "most-fractional";
  return j;
}

void echo_config(const std::string& command, const ordered_json& cfg,
                 bool json_mode) {
  ordered_json full;
  full["command"] = command;
  full.update(cfg);
  if (json_mode) return;  // folded into the JSON summary instead
  std::cout << "config " << full.dump() << "\n";
}

void warn_if_clamped(const RobustOpts& rob) {
  if (rob.enabled && rob.gamma > 1.0) {
    std::cerr << "warning: gamma " << rob.gamma
              << " exceeds the per-row uncertainty budget; clamped to 1\n";
  }
}

int status_exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return 0;
    case SolveStatus::FeasibleGap:
    case SolveStatus::Infeasible:
    case SolveStatus::Unbounded:
    case SolveStatus::LimitHit:
      return 1;
    default:
      return 1;
  }
}

int run_generate(const SourceOpts& src, const std::string& output,
                 bool json_mode) {
  if (src.preset <= 0 && src.shape.empty()) {
    throw CLI::ValidationError("generate requires --preset or --shape");
  }
  Instance inst = src.shape.empty()
                      ? coldchain::generate_instance(src.preset, src.seed)
                      : coldchain::generate_instance(parse_shape(src.shape),
                                                     src.seed);
  std::string path =
      resolve_output(output, "instance_p" + std::to_string(src.preset) + ".json");
  coldchain::save_instance(inst, path);
  ordered_json cfg = source_config(src);
  cfg["output"] = path;
  echo_config("generate", cfg, json_mode);
  if (json_mode) {
    ordered_json out;
    out["config"] = cfg;
    out["path"] = path;
    out["suppliers"] = inst.dims.suppliers;
    out["dcs"] = inst.dims.dcs;
    out["vcs"] = inst.dims.vcs;
    out["vaccines"] = inst.dims.vaccines;
    out["periods"] = inst.dims.periods;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "wrote " << path << " (" << inst.dims.suppliers
              << " suppliers, " << inst.dims.dcs << " dcs, " << inst.dims.vcs
              << " vcs, " << inst.dims.vaccines << " vaccines, "
              << inst.dims.periods << " periods)\n";
  }
  return 0;
}

int run_solve(const SourceOpts& src, const RobustOpts& rob,
              const SolverOpts& sopts, const std::string& output,
              const std::string& mps_path, bool json_mode) {
  Instance inst = resolve_instance(src);
  warn_if_clamped(rob);
  coldchain::BuildResult build;
  if (rob.enabled) {
    coldchain::RobustConfig cfg = inst.has_robust ? inst.robust
                                                  : coldchain::RobustConfig{};
    cfg.gamma = rob.gamma;
    cfg.deviation_fraction = rob.deviation;
    build = coldchain::build_robust(inst, cfg);
  } else {
    build = coldchain::build_deterministic(inst);
  }
  if (!mps_path.empty()) {
    std::ofstream mps(mps_path, std::ios::binary);
    if (!mps) throw std::runtime_error("cannot open " + mps_path);
    coldchain::write_mps(build.model, mps);
  }
  coldchain::SolveOptions so = to_solve_options(sopts);
  so.branch_priority = build.branch_priority;
  coldchain::Solution sol = coldchain::solve_milp(build.model, so);

  ordered_json cfg = source_config(src);
  cfg.update(robust_config(rob));
  cfg.update(solver_config(sopts));
  echo_config("solve", cfg, json_mode);

  ordered_json summary;
  summary["schema"] = kSolutionSchema;
  summary["config"] = cfg;
  summary["status"] = coldchain::to_string(sol.status);
  summary["objective"] = sol.objective;
  summary["bound"] = sol.bound;
  summary["gap"] = sol.gap;
  summary["nodes"] = sol.nodes;
  summary["lp_iterations"] = sol.lp_iterations;
  if (sol.has_point()) {
    coldchain::ObjectiveComponents c =
        coldchain::objective_components(inst, build.vars, sol.values);
    ordered_json comps;
    comps["holding"] = c.holding;
    comps["transport"] = c.transport;
    comps["deprivation"] = c.deprivation;
    comps["weighted_total"] = c.weighted_total;
    summary["components"] = comps;
  }
  if (!sol.message.empty()) summary["message"] = sol.message;
  std::cerr << "wall_time " << sol.wall_time << "\n";

  if (!output.empty()) {
    ordered_json file = summary;
    if (sol.has_point()) file["values"] = sol.values;
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + output);
    out << file.dump(2) << "\n";
  }
  if (json_mode) {
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << "status " << coldchain::to_string(sol.status) << "\n";
    if (sol.has_point()) {
      std::cout << "objective " << sol.objective << " (bound " << sol.bound
                << ", gap " << sol.gap << ", nodes " << sol.nodes << ")\n";
      const ordered_json& c = summary["components"];
      std::cout << "holding " << c["holding"].get<double>() << " transport "
                << c["transport"].get<double>() << " deprivation "
                << c["deprivation"].get<double>() << "\n";
    } else if (!sol.message.empty()) {
      std::cout << sol.message << "\n";
    }
    if (!output.empty()) std::cout << "wrote " << output << "\n";
  }
  return status_exit_code(sol.status);
}

int emit_and_report(const coldchain::SensitivityReport& rep,
                    const std::string& output, const std::string& format,
                    bool json_mode, const ordered_json& cfg,
                    const std::string& command) {
  echo_config(command, cfg, json_mode);
  if (!output.empty()) {
    coldchain::emit_report(rep,
                           format == "text"
                               ? coldchain::ReportFormat::StructuredText
                               : coldchain::ReportFormat::Csv,
                           output);
  }
  if (json_mode) {
    ordered_json out = ordered_json::parse(coldchain::report_to_text(rep));
    out["config"] = cfg;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << coldchain::report_to_csv(rep);
    if (!output.empty()) std::cout << "wrote " << output << "\n";
  }
  for (const coldchain::ReportRow& r : rep.rows) {
    if (r.status != SolveStatus::Optimal &&
        r.status != SolveStatus::FeasibleGap) {
      return 1;
    }
  }
  return 0;
}

int run_validate(const SourceOpts& src, const std::string& solution_path,
                 bool json_mode) {
  Instance inst = resolve_instance(src);
  std::vector<std::string> problems = coldchain::validate_instance(inst);
  bool robust_solution = false;
  if (!solution_path.empty()) {
    std::ifstream in(solution_path);
    if (!in) throw std::runtime_error("cannot open " + solution_path);
    ordered_json sol_json = ordered_json::parse(in);
    if (sol_json.value("schema", "") != kSolutionSchema) {
      throw std::runtime_error("unrecognized solution schema in " +
                               solution_path);
    }
    coldchain::BuildResult build;
    if (sol_json.contains("config") &&
        sol_json["config"].value("robust", false)) {
      robust_solution = true;
      coldchain::RobustConfig cfg =
          inst.has_robust ? inst.robust : coldchain::RobustConfig{};
      cfg.gamma = sol_json["config"].value("gamma", cfg.gamma);
      cfg.deviation_fraction =
          sol_json["config"].value("deviation", cfg.deviation_fraction);
      build = coldchain::build_robust(inst, cfg);
    } else {
      build = coldchain::build_deterministic(inst);
    }
    if (!sol_json.contains("values")) {
      throw std::runtime_error("solution file has no values to check");
    }
    coldchain::Solution sol;
    sol.status = SolveStatus::Optimal;
    sol.values = sol_json["values"].get<std::vector<double>>();
    if (static_cast<int>(sol.values.size()) != build.model.num_vars()) {
      problems.push_back("solution has " + std::to_string(sol.values.size()) +
                         " values, model has " +
                         std::to_string(build.model.num_vars()) + " variables");
    } else {
      coldchain::ValidationReport rep = coldchain::check_solution(
          build.model, sol, 1e-6, inst, build.vars);
      if (!rep.eval.feasible()) {
        problems.push_back(
            "model infeasibility, max violation " +
            std::to_string(rep.eval.max_violation));
      }
      for (const std::string& v : rep.domain_violations) problems.push_back(v);
    }
  }
  ordered_json cfg = source_config(src);
  if (!solution_path.empty()) cfg["solution"] = solution_path;
  echo_config("validate", cfg, json_mode);
  if (json_mode) {
    ordered_json out;
    out["config"] = cfg;
    out["ok"] = problems.empty();
    out["robust_solution"] = robust_solution;
    out["problems"] = problems;
    std::cout << out.dump(2) << "\n";
  } else {
    if (problems.empty()) {
      std::cout << "ok\n";
    } else {
      for (const std::string& p : problems) std::cout << "problem: " << p << "\n";
    }
  }
  return problems.empty() ? 0 : 1;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string("bad ") + what + " value: " + item);
    }
  }
  if (out.empty()) throw CLI::ValidationError(std::string(what) + " list empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-echelon vaccine supply chain planning toolkit"};
  app.require_subcommand(1);
  bool json_mode = false;
  app.add_flag("--json", json_mode, "Structured JSON summaries on stdout");

  SourceOpts src;
  RobustOpts rob;
  SolverOpts sopts;
  std::string output;
  std::string mps_path;
  std::string format = "csv";
  std::string solution_path;
  std::string preset_list = "1,2,3";
  std::string gamma_list = "0,0.25,0.5,0.75,1";
  std::string fraction_list;
  double magnitude = 0.10;
  bool table4 = false, table5 = false;
  bool relax_service = false;

  CLI::App* generate = app.add_subcommand("generate", "Write an instance file");
  add_source_flags(generate, src);
  generate->add_option("-o,--output", output, "Output instance path");

  CLI::App* solve = app.add_subcommand("solve", "Solve one instance");
  add_source_flags(solve, src);
  add_robust_flags(solve, rob);
  add_solver_flags(solve, sopts);
  solve->add_option("-o,--output", output, "Solution JSON path");
  solve->add_option("--dump-mps", mps_path, "Also write the model as MPS");

  CLI::App* sens = app.add_subcommand(
      "sensitivity", "Budget/order scenarios and budget sweep");
  add_source_flags(sens, src);
  add_robust_flags(sens, rob);
  add_solver_flags(sens, sopts);
  sens->add_flag("--scenarios", table4, "Run the 8 budget/order scenarios");
  sens->add_flag("--budget-sweep", table5, "Run the budget-decrease sweep");
  sens->add_option("--magnitude", magnitude, "Scenario perturbation fraction");
  sens->add_option("--fractions", fraction_list,
                   "Comma-separated budget cut fractions");
  sens->add_flag("--relax-service", relax_service,
                 "Re-solve infeasible sweep levels without the service floor");
  sens->add_option("-o,--output", output, "Report path (scenarios get .scenarios/.sweep suffixes when both run)");
  sens->add_option("--format", format, "Report format: csv or text")
      ->check(CLI::IsMember({"csv", "text"}));

  CLI::App* gsweep = app.add_subcommand("gamma-sweep",
                                        "Objective vs budget of uncertainty");
  add_source_flags(gsweep, src);
  add_solver_flags(gsweep, sopts);
  gsweep->add_option("--gammas", gamma_list, "Comma-separated gamma points");
  gsweep->add_option("--deviation", rob.deviation,
                     "Deviation fraction of nominal values");
  gsweep->add_option("-o,--output", output, "Report path");
  gsweep->add_option("--format", format, "Report format: csv or text")
      ->check(CLI::IsMember({"csv", "text"}));

  CLI::App* validate = app.add_subcommand(
      "validate", "Check an instance file or a solution against it");
  add_source_flags(validate, src);
  validate->add_option("--solution", solution_path, "Solution JSON to check");

  CLI::App* ladder = app.add_subcommand("ladder",
                                        "Solve a ladder of preset sizes");
  ladder->add_option("--presets", preset_list, "Comma-separated preset ids");
  ladder->add_option("--seed", src.seed, "Generator seed");
  add_robust_flags(ladder, rob);
  add_solver_flags(ladder, sopts);
  ladder->add_option("-o,--output", output, "Report path");
  ladder->add_option("--format", format, "Report format: csv or text")
      ->check(CLI::IsMember({"csv", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*generate) return run_generate(src, output, json_mode);
    if (*solve) return run_solve(src, rob, sopts, output, mps_path, json_mode);

    AnalysisOptions aopts;
    aopts.solve = to_solve_options(sopts);
    aopts.use_robust = rob.enabled;
    aopts.robust.gamma = rob.gamma;
    aopts.robust.deviation_fraction = rob.deviation;
    aopts.relax_service_on_infeasible = relax_service;

    if (*sens) {
      warn_if_clamped(rob);
      if (!table4 && !table5) table4 = table5 = true;
      Instance inst = resolve_instance(src);
      ordered_json cfg = source_config(src);
      cfg.update(robust_config(rob));
      cfg["magnitude"] = magnitude;
      int rc = 0;
      if (table4) {
        coldchain::SensitivityReport rep =
            coldchain::run_budget_order_sensitivity(inst, magnitude, aopts);
        std::string path = output;
        if (!path.empty() && table5) path += ".scenarios";
        rc |= emit_and_report(rep, path, format, json_mode, cfg, "sensitivity");
      }
      if (table5) {
        std::vector<double> fr =
            fraction_list.empty() ? coldchain::default_sweep_fractions()
                                  : parse_double_list(fraction_list, "fraction");
        coldchain::SensitivityReport rep =
            coldchain::run_budget_sweep(inst, fr, aopts);
        std::string path = output;
        if (!path.empty() && table4) path += ".sweep";
        rc |= emit_and_report(rep, path, format, json_mode, cfg, "sensitivity");
      }
      return rc;
    }
    if (*gsweep) {
      Instance inst = resolve_instance(src);
      std::vector<double> gammas = parse_double_list(gamma_list, "gamma");
      coldchain::SensitivityReport rep =
          coldchain::gamma_sweep(inst, gammas, rob.deviation, aopts);
      ordered_json cfg = source_config(src);
      cfg["gammas"] = gammas;
      cfg["deviation"] = rob.deviation;
      return emit_and_report(rep, output, format, json_mode, cfg, "gamma-sweep");
    }
    if (*validate) return run_validate(src, solution_path, json_mode);
    if (*ladder) {
      std::vector<double> ids_d = parse_double_list(preset_list, "preset");
      std::vector<int> ids;
      for (double d : ids_d) {
        int id = static_cast<int>(d);
        if (id < 1 || id > coldchain::kNumPresets || d != id) {
          throw CLI::ValidationError("bad preset id in --presets");
        }
        ids.push_back(id);
      }
      coldchain::SensitivityReport rep =
          coldchain::run_ladder(ids, src.seed, aopts);
      ordered_json cfg;
      cfg["presets"] = ids;
      cfg["seed"] = src.seed;
      cfg.update(robust_config(rob));
      return emit_and_report(rep, output, format, json_mode, cfg, "ladder");
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
