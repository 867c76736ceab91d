#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rys/catalog.hpp"
#include "rys/curvature.hpp"
#include "rys/error.hpp"
#include "rys/identities.hpp"

namespace rys {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no rys::Error thrown";
  return ErrorCode::InvalidArgument;
}

TEST(Catalog, StableNames) {
  std::vector<std::string> entries;
  for (const auto& e : catalog_entries()) entries.push_back(e.name);
  EXPECT_EQ(entries, (std::vector<std::string>{"flat-r3", "flat-r4", "unit-s3", "sphere", "h3", "s2xr",
                                               "perturbed-flat"}));
  std::vector<std::string> cases;
  for (const auto& c : catalog_cases()) cases.push_back(c.name);
  for (const char* want : {"gaussian", "einstein-s3", "einstein-h3", "s2xr", "flat-product", "concircular-flat"}) {
    EXPECT_NE(std::find(cases.begin(), cases.end(), want), cases.end()) << want;
  }
  EXPECT_EQ(code_of([] { find_entry("nosuch"); }), ErrorCode::UnknownCase);
  EXPECT_EQ(code_of([] { find_case("nosuch"); }), ErrorCode::UnknownCase);
  EXPECT_EQ(code_of([] { make_instance("nosuch"); }), ErrorCode::UnknownCase);
}

TEST(Catalog, ClosedFormsMatchPipelineOnEveryChart) {
  for (const auto& e : catalog_entries()) {
    const ClosedForms& cf = e.closed_forms;
    for (const auto& chart : e.charts) {
      for (const auto& p : sample_points(chart, 30, 21)) {
        const CurvatureBundle b = curvature_bundle(e.metric, p);
        if (cf.scalar) EXPECT_NEAR(b.scalar, *cf.scalar, 1e-7) << e.name;
        const auto gv = e.metric(p);
        const Eigen::Map<const Eigen::MatrixXd> g(gv.data(), e.dim(), e.dim());
        if (cf.einstein) EXPECT_LE((b.ricci.matrix() - *cf.einstein * g).cwiseAbs().maxCoeff(), 1e-7) << e.name;
        if (cf.ricci) EXPECT_LE((b.ricci.matrix() - cf.ricci(p)).cwiseAbs().maxCoeff(), 1e-7) << e.name;
      }
    }
  }
}

TEST(Catalog, SphereEmbeddingsAgreeAcrossCharts) {
  for (double radius : {1.0, 2.0}) {
    const CatalogEntry e = make_sphere(radius);
    ASSERT_EQ(e.embeddings.size(), 2u);
    for (const auto& p : sample_points(ChartDomain::box("o", 3, 0.3, 1.1), 20, 22)) {
      const auto a = e.embeddings[0](p);
      const auto b = e.embeddings[1](stereographic_transition(p));
      double norm = 0.0;
      for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(a[i], b[i], 1e-14);
        norm += a[i] * a[i];
      }
      EXPECT_NEAR(std::sqrt(norm), radius, 1e-14);
    }
  }
  EXPECT_EQ(code_of([] { make_sphere(0.0); }), ErrorCode::InvalidArgument);
}

TEST(Catalog, StereographicTransition) {
  const ChartPoint p{0.3, -0.4, 1.2};
  const ChartPoint q = stereographic_transition(stereographic_transition(p));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(q[i], p[i], 1e-15);
  EXPECT_EQ(code_of([] { stereographic_transition({0.0, 0.0, 0.0}); }), ErrorCode::InvalidArgument);
}

TEST(Catalog, EveryCaseIsASoliton) {
  for (const auto& c : catalog_cases()) {
    const auto inst = c.build({});
    for (const auto& p : sample_points(inst.domain, 50, 23)) {
      EXPECT_LE(residual_norms(inst, p).max_abs, 1e-8) << c.name;
    }
  }
}

TEST(Catalog, NegativeControlsExceedTenTimesTolerance) {
  for (const auto& c : catalog_cases()) {
    // These fields are built from lambda, so shifting it keeps a soliton.
    if (c.name == "gaussian" || c.name == "eta-flat") continue;
    const auto base = c.build({});
    ParamOverrides shifted;
    shifted.lambda = base.params.lambda + 0.5;
    const auto inst = c.build(shifted);
    double worst = 0.0;
    for (const auto& p : sample_points(inst.domain, 20, 24)) worst = std::max(worst, residual_norms(inst, p).max_abs);
    EXPECT_GT(worst, 10.0 * kExactResidualTolerance) << c.name;
  }
}

TEST(Catalog, GaussianFamilyAndProductStructure) {
  for (double lambda : {-2.0, 0.0, 1.0, 2.0}) {
    ParamOverrides o;
    o.lambda = lambda;
    o.alpha = 0.4;
    o.beta = -1.1;
    const auto inst = make_instance("gaussian", o);
    for (const auto& p : sample_points(inst.domain, 20, 25)) EXPECT_LE(residual_norms(inst, p).max_abs, 1e-12);
  }
  const auto s2xr = make_instance("s2xr");
  for (const auto& p : sample_points(s2xr.domain, 20, 26)) {
    const Eigen::VectorXd dt = gradient(s2xr.metric, s2xr.potential(), p);
    EXPECT_NEAR(dt.dot(ricci(s2xr.metric, p).matrix() * dt), 0.0, 1e-14);
  }
}

TEST(Catalog, BalancedLambdaDefaults) {
  ParamOverrides o;
  o.alpha = 1.0;
  o.beta = 2.0;
  EXPECT_DOUBLE_EQ(make_instance("einstein-s3", o).params.lambda, 4.0);
  EXPECT_DOUBLE_EQ(make_instance("einstein-h3", o).params.lambda, -4.0);
  EXPECT_TRUE(make_instance("einstein-s3").compact);
  ParamOverrides zero_mu;
  zero_mu.mu = 0.0;
  EXPECT_EQ(code_of([&] { make_instance("s3-log-eigen", zero_mu); }), ErrorCode::InvalidArgument);
  ParamOverrides nan;
  nan.alpha = std::nan("");
  EXPECT_EQ(code_of([&] { make_instance("gaussian", nan); }), ErrorCode::InvalidArgument);
}

TEST(PerturbedFlat, ZeroEpsilonIsFlat) {
  const auto e = make_perturbed_flat(0.0, 42);
  for (const auto& p : sample_points(e.chart(), 10, 27)) EXPECT_EQ(ricci(e.metric, p).max_abs(), 0.0);
}

TEST(PerturbedFlat, SeededAndGuarded) {
  const auto a = make_perturbed_flat(1e-2, 42);
  const auto b = make_perturbed_flat(1e-2, 42);
  const auto c = make_perturbed_flat(1e-2, 43);
  const ChartPoint p{0.1, 0.2, -0.3};
  EXPECT_EQ(a.metric(p), b.metric(p));
  EXPECT_NE(a.metric(p), c.metric(p));
  for (const auto& q : sample_points(a.chart(), 20, 28)) EXPECT_TRUE(bianchi_residual(a.metric, q).passes(1e-6));
  EXPECT_GT(ricci(a.metric, p).max_abs(), 1e-4);
  EXPECT_EQ(code_of([] { make_perturbed_flat(10.0, 42); }), ErrorCode::NotSPD);
  EXPECT_EQ(code_of([] { make_perturbed_flat(-1e-3, 42); }), ErrorCode::InvalidArgument);
}

TEST(RandomPolynomial, DeterministicWithBoundedDegree) {
  const ScalarField f = random_polynomial(3, 2, 9);
  const ScalarField g = random_polynomial(3, 2, 9);
  const ChartPoint p{0.5, -0.25, 0.75};
  EXPECT_EQ(f(p), g(p));
  const LocalGeometry geo(MetricField::flat(3), p, 4);
  const Jet fj = geo.lift(f, 3);
  const int third[] = {0, 1, 2};
  const int second[] = {0, 1};
  EXPECT_EQ(fj.partial(third), 0.0);
  EXPECT_NE(fj.partial(second), 0.0);
  EXPECT_EQ(code_of([] { random_polynomial(6, 2, 1); }), ErrorCode::InvalidArgument);
}

}  // namespace
}  // namespace rys
