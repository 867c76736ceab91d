#include <benchmark/benchmark.h>

#include "rys/catalog.hpp"
#include "rys/curvature.hpp"
#include "rys/identities.hpp"

namespace {

void BM_CurvatureBundle(benchmark::State& state) {
  const rys::CatalogEntry e = rys::make_perturbed_flat(1e-2, 42);
  const rys::ChartPoint p{0.1, -0.2, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(rys::curvature_bundle(e.metric, p));
}
BENCHMARK(BM_CurvatureBundle);

void BM_LocalGeometryOrder4(benchmark::State& state) {
  const rys::CatalogEntry& e = rys::find_entry("unit-s3");
  const rys::ChartPoint p{0.3, 0.1, -0.4};
  for (auto _ : state) {
    const rys::LocalGeometry geo(e.metric, p, 4);
    benchmark::DoNotOptimize(geo.scalar());
  }
}
BENCHMARK(BM_LocalGeometryOrder4);

void BM_BochnerResidual(benchmark::State& state) {
  const rys::CatalogEntry e = rys::make_perturbed_flat(1e-2, 42);
  const rys::ScalarField f = rys::random_polynomial(3, 4, 7);
  const rys::ChartPoint p{0.1, -0.2, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(rys::bochner_residual(e.metric, f, p));
}
BENCHMARK(BM_BochnerResidual);

}  // namespace
