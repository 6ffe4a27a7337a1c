#include <benchmark/benchmark.h>

#include <algorithm>
#include <array>
#include <numbers>
#include <vector>

#include "eigenwave/eigensolve.hpp"
#include "eigenwave/laplacian.hpp"
#include "eigenwave/multigrid.hpp"
#include "eigenwave/operator.hpp"
#include "eigenwave/wavesolve.hpp"

using namespace eigenwave;

namespace {

DiscreteLaplacian square(int n, int order) {
  const std::array<AxisExtent, 2> ext{AxisExtent{0.0, 1.0}, AxisExtent{0.0, 1.0}};
  const std::array<int, 2> cells{n, n};
  return DiscreteLaplacian(StructuredGrid(2, ext, cells, order / 2), order,
                           BoundaryConditionSpec::dirichlet());
}

std::vector<double> random_vector(std::size_t n) {
  std::vector<double> v(n);
  SplitMix64 rng(7);
  rng.fill(v);
  return v;
}

// Implicit step size for omega = 12, N_ITS = 10.
constexpr double kDt = 2 * std::numbers::pi / 12.0 / 10;

void BM_LaplacianApply(benchmark::State& st) {
  const DiscreteLaplacian L = square(int(st.range(0)), int(st.range(1)));
  const auto x = random_vector(L.active_size());
  std::vector<double> y(x.size());
  GridFunction scratch;
  for (auto _ : st) {
    L.apply_active(x, y, scratch);
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * std::int64_t(x.size()));
}
BENCHMARK(BM_LaplacianApply)->ArgsProduct({{64, 256, 1024}, {2, 4}});

void BM_VCycle(benchmark::State& st) {
  const DiscreteLaplacian L = square(int(st.range(0)), 2);
  MultigridHierarchy mg(L, 0.5 * kDt * kDt);
  GridFunction b(L.grid(), 1.0), x(L.grid());
  for (auto _ : st) {
    mg.vcycle(b, x);
    benchmark::DoNotOptimize(x.values().data());
  }
  st.SetItemsProcessed(st.iterations() * std::int64_t(L.active_size()));
}
BENCHMARK(BM_VCycle)->Arg(64)->Arg(256)->Arg(1024);

void BM_DefiniteSolve(benchmark::State& st) {
  const DiscreteLaplacian L = square(int(st.range(0)), 2);
  const ImplicitMatrix M(L, kDt);
  LinearSolverSpec spec;
  spec.kind = SolverKind(st.range(1));
  spec.tolerance = 1e-10;
  DefiniteSolver solver(M, spec);
  const auto b = random_vector(M.size());
  std::vector<double> y(b.size());
  for (auto _ : st) {
    std::fill(y.begin(), y.end(), 0.0);
    benchmark::DoNotOptimize(solver.solve(b, y));
  }
  st.SetLabel(to_string(spec.kind));
}
BENCHMARK(BM_DefiniteSolve)
    ->Args({64, int(SolverKind::ConjugateGradient)})
    ->Args({64, int(SolverKind::Multigrid)})
    ->Args({256, int(SolverKind::ConjugateGradient)})
    ->Args({256, int(SolverKind::Multigrid)})
    ->Unit(benchmark::kMillisecond);

void BM_ApplyS(benchmark::State& st) {
  const DiscreteLaplacian L = square(int(st.range(0)), 2);
  LinearSolverSpec spec;
  spec.kind = SolverKind::Multigrid;
  EigenWaveOperator S(L, FilterSpec::implicit(12.0, 1, 10), SchemeKind::Implicit, spec);
  const auto x = random_vector(L.active_size());
  std::vector<double> y(x.size());
  for (auto _ : st) {
    S.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ApplyS)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
