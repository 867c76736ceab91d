#include <benchmark/benchmark.h>

#include <vector>

#include "rys/derivative.hpp"
#include "rys/jet.hpp"

namespace {

void BM_JetProduct(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const rys::Jet a = rys::exp(rys::Jet::variable(dim, order, 0, 0.3));
  const rys::Jet b = rys::sin(rys::Jet::variable(dim, order, dim - 1, 0.7));
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
  state.counters["terms"] = rys::jet_size(dim, order);
}
BENCHMARK(BM_JetProduct)->Args({3, 2})->Args({3, 4})->Args({4, 4})->Args({5, 4});

void BM_PartialBackends(benchmark::State& state) {
  const auto backend = static_cast<rys::DerivativeBackend>(state.range(0));
  const rys::ScalarField f([](const auto& x) {
    using std::exp;
    using std::sin;
    return exp(x[0] * x[1]) * sin(x[2]);
  });
  const rys::ChartDomain d = rys::ChartDomain::box("b", 3, -1.0, 1.0);
  const rys::ChartPoint p{0.1, 0.2, 0.3};
  const std::vector<int> idx{0, 1, 2};
  for (auto _ : state) benchmark::DoNotOptimize(rys::partial_derivative(f, d, p, idx, backend));
}
BENCHMARK(BM_PartialBackends)
    ->Arg(static_cast<int>(rys::DerivativeBackend::TaylorJet))
    ->Arg(static_cast<int>(rys::DerivativeBackend::NestedDual))
    ->Arg(static_cast<int>(rys::DerivativeBackend::FiniteDifference));

}  // namespace
