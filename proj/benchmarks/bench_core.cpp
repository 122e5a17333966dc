#include <benchmark/benchmark.h>

#include <random>

#include "lgot/arc_decomposition.hpp"
#include "lgot/oracle.hpp"
#include "lgot/pipeline.hpp"
#include "lgot/plan_fields.hpp"
#include "lgot/scenario.hpp"
#include "lgot/transport_map.hpp"

using namespace lgot;

namespace {

// Random points in the unit square; the assignment cost does not care whether they sit on a curve.
std::vector<OracleAtom> cloud(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<OracleAtom> out(n);
  for (auto& a : out) a.p = {U(rng), U(rng)};
  return out;
}

void BM_Hungarian(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  auto src = cloud(n, 1), dst = cloud(n, 2);
  for (auto _ : st) benchmark::DoNotOptimize(solve_assignment(src, dst, 1.0 / n).cost);
  st.SetComplexityN(n);
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(50, 800)->Complexity(benchmark::oNCubed);

void BM_Decompose(benchmark::State& st) {
  Scenario s = make_builtin("disk_cosine");
  SignedBoundaryMeasure f(s.g);
  for (auto _ : st) benchmark::DoNotOptimize(decompose(f, s.curve).chis.size());
}
BENCHMARK(BM_Decompose);

void BM_Rasterize(benchmark::State& st) {
  const int grid = static_cast<int>(st.range(0));
  Scenario s = make_builtin("disk_cosine");
  SignedBoundaryMeasure f(s.g);
  TransportMap map = TransportMap::build(s.curve, f, decompose(f, s.curve));
  TransportPlan plan = make_plan(map, 800);
  int nx = 0, ny = 0;
  Box box = grid_box(s.curve, grid, nx, ny);
  for (auto _ : st) benchmark::DoNotOptimize(rasterize(plan, box, nx, ny).v.data());
}
BENCHMARK(BM_Rasterize)->Arg(64)->Arg(128)->Arg(256);

void BM_PipelineDelta(benchmark::State& st) {
  Scenario s = make_builtin("delta_square");
  RunOptions o;
  o.grid = 64;
  for (auto _ : st) benchmark::DoNotOptimize(run_pipeline(s, o).report.exit_code);
}
BENCHMARK(BM_PipelineDelta);

}  // namespace

BENCHMARK_MAIN();
