#include <benchmark/benchmark.h>

#include <cmath>

#include "sliceop/operators.hpp"
#include "sliceop/pde.hpp"
#include "sliceop/transform.hpp"

using namespace sliceop;

namespace {

Workspace& shared_ws() {
  static Workspace ws(Domain::disk_slice(0.25, 0.75));
  return ws;
}

void BM_EvalBasisAll(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto& ctx = shared_ws().basis(BasisParams{});
  ctx.ensure_degree(N);
  std::vector<double> out(BlockVector::length(N));
  double x = 0.31;
  for (auto _ : state) {
    ctx.eval_all(N, x, 0.05, out);
    benchmark::DoNotOptimize(out.data());
    x = x < 0.7 ? x + 1e-4 : 0.31;
  }
  state.SetComplexityN(N);
}
BENCHMARK(BM_EvalBasisAll)->RangeMultiplier(2)->Range(25, 200)->Complexity(benchmark::oNSquared);

void BM_Clenshaw(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto& ctx = shared_ws().basis(BasisParams{});
  ctx.ensure_degree(N);
  BlockVector c(BasisId{shared_ws().domain(), BasisParams{}, false}, N);
  for (int i = 0; i < c.size(); ++i) c[i] = 1.0 / (1 + i);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctx.clenshaw(c.data(), N, 0.4, 0.1));
  }
  state.SetComplexityN(N);
}
BENCHMARK(BM_Clenshaw)->RangeMultiplier(2)->Range(25, 200)->Complexity(benchmark::oNSquared);

void BM_AssembleDx(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  Workspace& ws = shared_ws();
  ws.basis(BasisParams{}).ensure_degree(N + 1);  // warm tables
  for (auto _ : state) {
    BBBMatrix dx = build_dx(ws, BasisParams{}, N + 1, N + 1);
    benchmark::DoNotOptimize(dx.allocated_doubles());
  }
  state.SetComplexityN(N);
}
BENCHMARK(BM_AssembleDx)->RangeMultiplier(2)->Range(25, 200)->Complexity(benchmark::oNCubed);

void BM_AssembleLaplacian(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  Workspace& ws = shared_ws();
  for (auto _ : state) {
    BBBMatrix lap = laplacian_dirichlet(ws, N);
    benchmark::DoNotOptimize(lap.allocated_doubles());
  }
  state.SetComplexityN(N);
}
BENCHMARK(BM_AssembleLaplacian)->RangeMultiplier(2)->Range(25, 100)->Complexity(benchmark::oNCubed);

void BM_Analyze(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  Workspace& ws = shared_ws();
  auto f = [](double x, double y) { return std::exp(x + y); };
  for (auto _ : state) {
    BlockVector c = analyze(ws, disk_slice_params(1, 1, 1), f, N);
    benchmark::DoNotOptimize(c.data().data());
  }
  state.SetComplexityN(N);
}
BENCHMARK(BM_Analyze)->RangeMultiplier(2)->Range(16, 64);

void BM_PoissonSolve(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  Workspace& ws = shared_ws();
  auto f = [](double x, double y) {
    return 1 + std::erf(5 * (1 - 10 * ((x - 0.5) * (x - 0.5) + y * y)));
  };
  for (auto _ : state) {
    Solution sol = solve_poisson(ws, f, N);
    benchmark::DoNotOptimize(sol.residual);
  }
}
BENCHMARK(BM_PoissonSolve)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
