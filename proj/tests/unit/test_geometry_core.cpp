#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "rys/catalog.hpp"
#include "rys/derivative.hpp"
#include "rys/error.hpp"
#include "rys/field.hpp"
#include "rys/jet.hpp"
#include "rys/parallel.hpp"

namespace rys {
namespace {

constexpr DerivativeBackend kBackends[] = {DerivativeBackend::NestedDual, DerivativeBackend::TaylorJet,
                                           DerivativeBackend::FiniteDifference};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no rys::Error thrown";
  return ErrorCode::InvalidArgument;
}

const ChartDomain kBox = ChartDomain::box("box", 3, -2.0, 2.0);

ScalarField sin_cos() {
  return ScalarField([](const auto& x) {
    using std::cos;
    using std::sin;
    return sin(x[0]) * cos(x[1]);
  });
}

TEST(PartialDerivative, PolynomialSecondPartial) {
  const ScalarField f([](const auto& x) { return x[0] * x[0] * x[1]; });
  const int idx[] = {0, 0};
  for (auto b : kBackends) {
    EXPECT_NEAR(partial_derivative(f, kBox, {1.0, 0.5, 0.0}, idx, b), 1.0, 1e-9);
  }
  const ChartDomain wide = ChartDomain::box("wide", 3, -4.0, 4.0);
  EXPECT_NEAR(partial_derivative(f, wide, {1.0, 2.0, 0.0}, idx), 4.0, 1e-12);
}

TEST(PartialDerivative, EmptyIndexIsValue) {
  const ScalarField f = sin_cos();
  const ChartPoint p{0.3, 0.7, 0.1};
  for (auto b : kBackends) {
    EXPECT_DOUBLE_EQ(partial_derivative(f, kBox, p, {}, b), std::sin(0.3) * std::cos(0.7));
  }
}

TEST(PartialDerivative, ThirdPartialMatchesHandDerivative) {
  // d/dx0 sin(x0) = cos(x0); d^2/dx1^2 cos(x1) = -cos(x1)
  const double expected = std::cos(0.3) * -std::cos(0.7);
  const ChartPoint p{0.3, 0.7, 0.1};
  const int idx[] = {0, 1, 1};
  EXPECT_NEAR(partial_derivative(sin_cos(), kBox, p, idx, DerivativeBackend::NestedDual), expected, 1e-14);
  EXPECT_NEAR(partial_derivative(sin_cos(), kBox, p, idx, DerivativeBackend::TaylorJet), expected, 1e-14);
  EXPECT_NEAR(partial_derivative(sin_cos(), kBox, p, idx, DerivativeBackend::FiniteDifference), expected,
              1e-7 * std::abs(expected));
}

TEST(PartialDerivative, OrderContractOfFiniteDifferences) {
  const ScalarField f([](const auto& x) {
    using std::exp;
    using std::sin;
    return exp(0.5 * x[0]) * sin(x[1] + 0.3 * x[2]);
  });
  const ChartPoint p{0.2, -0.4, 0.6};
  const double tol[] = {0.0, 1e-9, 1e-9, 1e-7, 1e-5};
  const std::vector<std::vector<int>> indices = {{0}, {1}, {0, 1}, {2, 2}, {0, 1, 2}, {1, 1, 2}, {0, 0, 1, 2}, {1, 1, 1, 1}};
  for (const auto& idx : indices) {
    const double exact = partial_derivative(f, kBox, p, idx, DerivativeBackend::NestedDual);
    const double fd = partial_derivative(f, kBox, p, idx, DerivativeBackend::FiniteDifference);
    EXPECT_LE(std::abs(fd - exact), tol[idx.size()] * (1.0 + std::abs(exact))) << "order " << idx.size();
  }
}

TEST(PartialDerivative, MixedPartialsAreSymmetric) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ScalarField f = random_polynomial(3, 4, seed);
    const auto pts = sample_points(kBox, 10, seed);
    for (const auto& p : pts) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const int ij[] = {i, j};
          const int ji[] = {j, i};
          const double a = partial_derivative(f, kBox, p, ij);
          const double b = partial_derivative(f, kBox, p, ji);
          EXPECT_LE(std::abs(a - b), 1e-9 * (1.0 + std::abs(a)));
        }
      }
    }
  }
}

TEST(PartialDerivative, Linearity) {
  const ScalarField f = random_polynomial(3, 3, 11);
  const ScalarField g = sin_cos();
  const ScalarField h = ScalarField::linear_combination(2.5, f, -0.75, g);
  const std::vector<std::vector<int>> indices = {{0}, {0, 2}, {1, 1, 2}, {0, 1, 1, 2}};
  for (const auto& p : sample_points(kBox, 20, 3)) {
    for (const auto& idx : indices) {
      const double lhs = partial_derivative(h, kBox, p, idx);
      const double rhs = 2.5 * partial_derivative(f, kBox, p, idx) - 0.75 * partial_derivative(g, kBox, p, idx);
      EXPECT_LE(std::abs(lhs - rhs), 1e-10 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST(PartialDerivative, DualAndFiniteDifferenceAgreeOnCatalogMetrics) {
  for (const auto& entry : catalog_entries()) {
    for (const auto& chart : entry.charts) {
      const ScalarField g00 = entry.metric.component(0, 0);
      const ScalarField g01 = entry.metric.component(0, entry.dim() - 1);
      for (const auto& p : sample_points(chart, 5, 17)) {
        for (const auto& idx : std::vector<std::vector<int>>{{0}, {1, 2}, {0, 1, 2}, {2, 2, 2}}) {
          for (const ScalarField& f : {g00, g01}) {
            const double dual = partial_derivative(f, chart, p, idx, DerivativeBackend::NestedDual);
            const double fd = partial_derivative(f, chart, p, idx, DerivativeBackend::FiniteDifference);
            EXPECT_LE(std::abs(dual - fd), 1e-7 * (1.0 + std::abs(dual))) << entry.name;
          }
        }
      }
    }
  }
}

TEST(PartialDerivative, Errors) {
  const ScalarField f = sin_cos();
  const int five[] = {0, 0, 1, 1, 2};
  EXPECT_EQ(code_of([&] { partial_derivative(f, kBox, {0.0, 0.0, 0.0}, five); }), ErrorCode::OrderTooHigh);
  const int one[] = {0};
  // margin is 5 steps of 1e-2 * width = 0.2
  EXPECT_EQ(code_of([&] { partial_derivative(f, kBox, {1.9, 0.0, 0.0}, one); }), ErrorCode::StencilOutOfDomain);
  const int bad[] = {3};
  EXPECT_EQ(code_of([&] { partial_derivative(f, kBox, {0.0, 0.0, 0.0}, bad); }), ErrorCode::InvalidArgument);
}

TEST(ChartDomain, Invariants) {
  EXPECT_EQ(code_of([] { ChartDomain("line", {{0.0, 1.0}}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { ChartDomain("flat", {{0.0, 1.0}, {1.0, 1.0}}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { ChartPoint{0.0, std::nan("")}; }), ErrorCode::InvalidArgument);
  const ChartDomain d = ChartDomain::box("d", 3, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(d.step(0), 1e-2);
  EXPECT_DOUBLE_EQ(d.margin(0), 5e-2);
  EXPECT_TRUE(d.contains_with_margin({0.5, 0.5, 0.5}));
  EXPECT_FALSE(d.contains_with_margin({0.04, 0.5, 0.5}));
  EXPECT_TRUE(d.contains({0.04, 0.5, 0.5}));
}

TEST(SamplePoints, DeterministicForFixedSeed) {
  const ChartDomain unit = ChartDomain::box("unit", 3, -1.0, 1.0);
  EXPECT_EQ(sample_points(unit, 10, 7), sample_points(unit, 10, 7));
  EXPECT_NE(sample_points(unit, 10, 7), sample_points(unit, 10, 8));
}

TEST(SamplePoints, InteriorWithMargin) {
  const ChartDomain d("skew", {{-3.0, 0.5}, {0.1, 0.2}, {5.0, 9.0}});
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    for (const auto& p : sample_points(d, 100, seed)) EXPECT_TRUE(d.contains_with_margin(p));
  }
  EXPECT_EQ(code_of([&] { sample_points(d, 0, 1); }), ErrorCode::InvalidArgument);
}

TEST(SamplePoints, MeanOfUnitCube) {
  const ChartDomain cube = ChartDomain::box("cube", 3, 0.0, 1.0);
  const auto pts = sample_points(cube, 1000, 1);
  for (int axis = 0; axis < 3; ++axis) {
    double sum = 0.0;
    for (const auto& p : pts) sum += p[axis];
    EXPECT_NEAR(sum / 1000.0, 0.5, 0.05);
  }
}

TEST(Jet, ElementaryFunctionsMatchHandDerivatives) {
  // f = exp(x0 x1) at (0.4, -0.3): f_0 = x1 f, f_01 = (1 + x0 x1) f, f_011 = x0 (2 + x0 x1) f
  const double x0 = 0.4;
  const double x1 = -0.3;
  const Jet a = Jet::variable(2, 4, 0, x0);
  const Jet b = Jet::variable(2, 4, 1, x1);
  const Jet f = exp(a * b);
  const double e = std::exp(x0 * x1);
  const int i0[] = {0};
  const int i01[] = {0, 1};
  const int i011[] = {0, 1, 1};
  EXPECT_NEAR(f.partial(i0), x1 * e, 1e-15);
  EXPECT_NEAR(f.partial(i01), (1.0 + x0 * x1) * e, 1e-15);
  EXPECT_NEAR(f.partial(i011), x0 * (2.0 + x0 * x1) * e, 1e-15);

  // g = log(1 + x0^2) / sqrt(x0): compare order-4 derivative with nested duals
  const ScalarField g([](const auto& x) {
    using std::atan;
    using std::cosh;
    using std::log;
    using std::sqrt;
    return log(1.0 + x[0] * x[0]) / sqrt(x[0]) + atan(x[1]) * cosh(x[0]);
  });
  const ChartDomain d = ChartDomain::box("d", 2, 0.1, 2.0);
  const ChartPoint p{0.8, 0.9};
  for (const auto& idx : std::vector<std::vector<int>>{{0, 0, 0, 0}, {0, 1, 1, 1}, {1, 1}}) {
    const double jet = partial_derivative(g, d, p, idx, DerivativeBackend::TaylorJet);
    const double dual = partial_derivative(g, d, p, idx, DerivativeBackend::NestedDual);
    EXPECT_NEAR(jet, dual, 1e-12 * (1.0 + std::abs(dual)));
  }
}

TEST(Jet, GuardsAndTruncation) {
  EXPECT_EQ(code_of([] { Jet::variable(6, 2, 0, 0.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { Jet::variable(2, 5, 0, 0.0); }), ErrorCode::OrderTooHigh);
  const Jet x = Jet::variable(2, 2, 0, 1.0);
  const int three[] = {0, 0, 0};
  EXPECT_EQ(code_of([&] { x.partial(three); }), ErrorCode::OrderTooHigh);
  // x^3 truncated at order 2 about 1: 1 + 3h + 3h^2
  const Jet cube = x * x * x;
  const int e2[] = {2, 0};
  EXPECT_DOUBLE_EQ(cube.coefficient(e2), 3.0);
  EXPECT_EQ(cube.truncated(1).order(), 1);
  EXPECT_DOUBLE_EQ(cube.derivative(0).value(), 3.0);
}

TEST(NestedDual, SecondDerivative) {
  // d^2/dx^2 x sin(x) = 2 cos(x) - x sin(x)
  const double x = 0.7;
  const Dual2 v(Dual1(x, 1.0), Dual1(1.0, 0.0));
  const Dual2 y = v * sin(v);
  EXPECT_NEAR(y.eps.eps, 2.0 * std::cos(x) - x * std::sin(x), 1e-15);
  EXPECT_NEAR(y.re.eps, std::sin(x) + x * std::cos(x), 1e-15);
}

TEST(Fields, ComponentsAndPullback) {
  const VectorField v(3, [](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return std::vector<T>{x[1], T(2.0) * x[0]};
  });
  const auto val = v(ChartPoint{1.0, 3.0, 0.0});
  ASSERT_EQ(val.size(), 3u);
  EXPECT_DOUBLE_EQ(val[0], 3.0);
  EXPECT_DOUBLE_EQ(val[1], 2.0);
  EXPECT_DOUBLE_EQ(val[2], 0.0);
  EXPECT_DOUBLE_EQ(v.component(1)(ChartPoint{1.0, 3.0, 0.0}), 2.0);

  const MetricField m(2, [](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return std::vector<T>{T(1.0), x[0], T(-99.0), T(4.0)};
  });
  const auto g = m(ChartPoint{0.5, 0.0});
  EXPECT_DOUBLE_EQ(g[2], 0.5);  // lower triangle mirrors the upper one

  const ScalarField ambient([](const auto& y) { return y[0] * y[1]; });
  const ScalarField pulled = pullback(ambient, v);
  EXPECT_DOUBLE_EQ(pulled(ChartPoint{1.0, 3.0, 0.0}), 6.0);
}

TEST(Parallel, EveryIndexOnceAndErrorsPropagate) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(50,
                            [](std::size_t i) {
                              if (i == 17) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
  parallel_for(0, [](std::size_t) { FAIL(); });
}

TEST(Parallel, WorkerCountHonoursEnvironment) {
  ::setenv("RYS_LAB_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  ::setenv("RYS_LAB_THREADS", "garbage", 1);
  EXPECT_GE(worker_count(), 1u);
  ::unsetenv("RYS_LAB_THREADS");
  EXPECT_GE(worker_count(), 1u);
}

}  // namespace
}  // namespace rys
