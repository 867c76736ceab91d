#include <benchmark/benchmark.h>

#include "rys/catalog.hpp"
#include "rys/quadrature.hpp"
#include "rys/solver.hpp"

namespace {

void BM_SphereVolume(benchmark::State& state) {
  const rys::CatalogEntry& s3 = rys::find_entry("unit-s3");
  const rys::QuadratureOptions opt{static_cast<int>(state.range(0)), 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(rys::volume(s3, opt));
  state.counters["nodes"] = static_cast<double>(rys::make_grid(s3, opt).size());
}
BENCHMARK(BM_SphereVolume)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_RadialSolve(benchmark::State& state) {
  const rys::Background flat{rys::BackgroundKind::Flat, 1.0, 3};
  const rys::RadialGrid grid{1e-3, 2.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(rys::solve_radial({1.0, 0.0, 2.0, 0.0}, flat, grid));
}
BENCHMARK(BM_RadialSolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
