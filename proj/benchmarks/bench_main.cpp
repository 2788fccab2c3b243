#include <benchmark/benchmark.h>

#include "coldchain/builder.hpp"
#include "coldchain/instance.hpp"
#include "coldchain/robust.hpp"
#include "coldchain/solver.hpp"

namespace {

using namespace coldchain;

Dimensions bench_shape(int periods, int dcs, int vcs) {
  Dimensions d;
  d.suppliers = 3;
  d.dcs = dcs;
  d.vcs = vcs;
  d.vaccines = 1;
  d.age_groups = 4;
  d.periods = periods;
  return d;
}

void BM_GenerateInstance(benchmark::State& state) {
  Dimensions d = bench_shape(static_cast<int>(state.range(0)), 2, 4);
  for (auto _ : state) {
    Instance inst = generate_instance(d, 3);
    benchmark::DoNotOptimize(inst.demand.demand.data());
  }
}
BENCHMARK(BM_GenerateInstance)->Arg(5)->Arg(10)->Arg(20);

void BM_BuildModel(benchmark::State& state) {
  Instance inst =
      generate_instance(bench_shape(static_cast<int>(state.range(0)), 2, 4), 3);
  for (auto _ : state) {
    BuildResult b = build_deterministic(inst);
    benchmark::DoNotOptimize(b.model.num_rows());
  }
  BuildResult b = build_deterministic(inst);
  state.counters["rows"] = b.model.num_rows();
  state.counters["vars"] = b.model.num_vars();
}
BENCHMARK(BM_BuildModel)->Arg(5)->Arg(10)->Arg(20);

void BM_BuildRobust(benchmark::State& state) {
  Instance inst =
      generate_instance(bench_shape(static_cast<int>(state.range(0)), 2, 4), 3);
  RobustConfig cfg;
  cfg.gamma = 0.5;
  cfg.deviation_fraction = 0.1;
  for (auto _ : state) {
    BuildResult b = build_robust(inst, cfg);
    benchmark::DoNotOptimize(b.model.num_rows());
  }
}
BENCHMARK(BM_BuildRobust)->Arg(5)->Arg(10);

void BM_LpRelaxation(benchmark::State& state) {
  Instance inst =
      generate_instance(bench_shape(static_cast<int>(state.range(0)), 2, 4), 3);
  BuildResult b = build_deterministic(inst);
  long iters = 0;
  for (auto _ : state) {
    Solution s = solve_lp(b.model);
    iters = s.lp_iterations;
    benchmark::DoNotOptimize(s.objective);
  }
  state.counters["lp_iterations"] = static_cast<double>(iters);
}
BENCHMARK(BM_LpRelaxation)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SolveMilpTiny(benchmark::State& state) {
  Dimensions d = bench_shape(3, 1, 2);
  d.age_groups = 3;
  Instance inst = generate_instance(d, static_cast<std::uint64_t>(state.range(0)));
  BuildResult b = build_deterministic(inst);
  SolveOptions opts;
  opts.branch_priority = b.branch_priority;
  long nodes = 0;
  for (auto _ : state) {
    Solution s = solve_milp(b.model, opts);
    nodes = s.nodes;
    benchmark::DoNotOptimize(s.objective);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_SolveMilpTiny)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_EvaluateSolution(benchmark::State& state) {
  Instance inst = generate_instance(bench_shape(5, 2, 4), 3);
  BuildResult b = build_deterministic(inst);
  std::vector<double> zeros(b.model.num_vars(), 0.0);
  for (auto _ : state) {
    EvalReport rep = b.model.evaluate(zeros, 1e-6);
    benchmark::DoNotOptimize(rep.max_violation);
  }
}
BENCHMARK(BM_EvaluateSolution);

}  // namespace

BENCHMARK_MAIN();
