#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "fuzzyflow/anfis.hpp"
#include "fuzzyflow/formula.hpp"
#include "fuzzyflow/lcm.hpp"
#include "fuzzyflow/solver.hpp"

using namespace fuzzyflow;

namespace {

std::string read(const char* name) {
  std::ifstream in(std::string(FUZZYFLOW_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A ring of n nodes fed from the start with a small weight.
FlowGraph ring(int n) {
  std::vector<FlowNode> nodes(static_cast<std::size_t>(n));
  std::vector<FlowEdge> edges;
  for (int i = 0; i < n; ++i) {
    nodes[static_cast<std::size_t>(i)].id = "n" + std::to_string(i);
    if (i == 0) continue;
    nodes[static_cast<std::size_t>(i)].transfer.emplace("p", parse_formula("0.9 & (In | 0.2)"));
    const int prev = i == 1 ? n - 1 : i - 1;
    edges.push_back({"n0", nodes[static_cast<std::size_t>(i)].id, 0.1});
    edges.push_back({"n" + std::to_string(prev), nodes[static_cast<std::size_t>(i)].id, 0.9});
  }
  return FlowGraph(nodes, edges, "n0", {{"p", TruthInterval(TruthValue(1.0))}});
}

void BM_SolveFigureOne(benchmark::State& state) {
  const FlowGraph g = parse_flow_problem(read("fig1.json")).graph;
  const SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(solve(g, cfg));
}
BENCHMARK(BM_SolveFigureOne);

void BM_SolveRing(benchmark::State& state) {
  const FlowGraph g = ring(static_cast<int>(state.range(0)));
  const SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(solve(g, cfg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveRing)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_StepRing(benchmark::State& state) {
  const FlowGraph g = ring(static_cast<int>(state.range(0)));
  const auto s = initial_state(g);
  for (auto _ : state) benchmark::DoNotOptimize(step(g, s, LogicFamily::frank(2.0)));
}
BENCHMARK(BM_StepRing)->Arg(256);

void BM_LcmDiffPcm(benchmark::State& state) {
  const LcmProblem p = parse_lcm_problem(read("diffpcm_t1.json"));
  const auto mode = static_cast<LcmMode>(state.range(0));
  const auto jobs = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(lcm_pipeline(p, mode, SolverConfig{}, jobs));
}
BENCHMARK(BM_LcmDiffPcm)
    ->Args({static_cast<int>(LcmMode::crisp), 1})
    ->Args({static_cast<int>(LcmMode::fuzzy), 1})
    ->Args({static_cast<int>(LcmMode::fuzzy), 4})
    ->Args({static_cast<int>(LcmMode::interval), 1});

void BM_FormulaEval(benchmark::State& state) {
  const Formula f = parse_formula("(a & !b) | (c & (d | !a)) | (b & c & !d)");
  const Valuation<TruthValue> v{{"a", TruthValue(0.3)}, {"b", TruthValue(0.6)}, {"c", TruthValue(0.9)}, {"d", TruthValue(0.1)}};
  const LogicFamily fam = LogicFamily::frank(state.range(0) == 0 ? 0.5 : 50.0);
  for (auto _ : state) benchmark::DoNotOptimize(eval(f, fam, v));
}
BENCHMARK(BM_FormulaEval)->Arg(0)->Arg(1);

void BM_AnfisPredict(benchmark::State& state) {
  const AnfisModel m = parse_anfis_model(read("fig5_model.json"));
  const std::vector<double> x{0.6, 0.2};
  for (auto _ : state) benchmark::DoNotOptimize(predict(m, x));
}
BENCHMARK(BM_AnfisPredict);

void BM_AnfisLsFit(benchmark::State& state) {
  const AnfisModel m = uniform_partition(2, static_cast<std::size_t>(state.range(0)));
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (int i = 0; i < 500; ++i) {
    xs.push_back({(i % 25) / 24.0, (i / 25) / 19.0});
    ys.push_back(xs.back()[0] * xs.back()[1]);
  }
  for (auto _ : state) benchmark::DoNotOptimize(ls_fit(m, xs, ys));
}
BENCHMARK(BM_AnfisLsFit)->Arg(3)->Arg(5);

}  // namespace
BENCHMARK_MAIN();
