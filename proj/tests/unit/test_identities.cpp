#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "rys/catalog.hpp"
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

ParamOverrides params(std::optional<double> a, std::optional<double> b, std::optional<double> l,
                      std::optional<double> m) {
  return {a, b, l, m};
}

TEST(IdentityResidual, RelativeGapDefinition) {
  const auto r = IdentityResidual::make("x", 3.0, -1.0, {0.0, 0.0});
  EXPECT_DOUBLE_EQ(r.abs_gap, 4.0);
  EXPECT_DOUBLE_EQ(r.rel_gap, 1.0);
  EXPECT_FALSE(r.passes(0.5));
  Eigen::VectorXd a(3);
  Eigen::VectorXd b(3);
  a << 1.0, 2.0, 3.0;
  b << 1.0, 2.5, 3.1;
  const auto w = IdentityResidual::worst_component("v", a, b, {0.0, 0.0});
  EXPECT_DOUBLE_EQ(w.lhs, 2.0);
  EXPECT_DOUBLE_EQ(w.rhs, 2.5);
}

TEST(TraceIdentity, GaussianAndEinsteinWithMu) {
  const auto gauss = make_instance("gaussian", params({}, {}, 2.0, {}));
  for (const auto& p : sample_points(gauss.domain, 20, 1)) EXPECT_TRUE(check_trace_identity(gauss, p).passes(1e-8));
  const auto s3 = make_instance("einstein-s3", params(1.0, 0.0, -2.0, 1.0));
  ASSERT_EQ(s3.effective_mu(), 1.0);
  for (const auto& p : sample_points(s3.domain, 20, 2)) EXPECT_TRUE(check_trace_identity(s3, p).passes(1e-8));
}

TEST(TraceIdentity, NotASolitonGuard) {
  const auto& e = find_entry("flat-r3");
  const SolitonInstance inst{{1.0, 0.0, 1.0, 0.0}, e.chart(), e.metric, Grys{ScalarField::constant(0.0)}};
  EXPECT_EQ(code_of([&] { check_trace_identity(inst, {0.1, 0.1, 0.1}); }), ErrorCode::NotASoliton);
  EXPECT_EQ(code_of([&] { require_soliton(inst, {0.1, 0.1, 0.1}); }), ErrorCode::NotASoliton);
}

TEST(GradientIdentity, ReducedFormAgreesForMuZero) {
  for (const char* name : {"gaussian", "einstein-s3", "einstein-h3", "s2xr"}) {
    const auto inst = make_instance(name);
    for (const auto& p : sample_points(inst.domain, 10, 3)) {
      const auto full = check_gradient_identity(inst, p);
      const auto reduced = check_reduced_gradient_identity(inst, p);
      EXPECT_TRUE(full.passes(1e-6)) << name;
      EXPECT_DOUBLE_EQ(full.abs_gap, reduced.abs_gap) << name;
    }
  }
}

TEST(LaplacianIdentity, EinsteinSphereWithMuCancels) {
  // 2 {6 - 2}{6 - 6} - 4 {12 - 12} = 0
  const auto s3 = make_instance("einstein-s3", params(1.0, 0.0, -2.0, 1.0));
  for (const auto& p : sample_points(s3.domain, 10, 4)) {
    const auto r = check_laplacian_identity(s3, p);
    EXPECT_NEAR(r.lhs, 0.0, 1e-10);
    EXPECT_NEAR(r.rhs, 0.0, 1e-10);
  }
}

TEST(LaplacianIdentity, GaussianReducedForm) {
  for (double lambda : {-2.0, 1.0, 2.0}) {
    const auto inst = make_instance("gaussian", params(0.7, 0.3, lambda, {}));
    for (const auto& p : sample_points(inst.domain, 10, 5)) {
      EXPECT_TRUE(check_laplacian_identity(inst, p).passes(1e-4));
      EXPECT_TRUE(check_reduced_laplacian_identity(inst, p).passes(1e-4));
      EXPECT_TRUE(check_reduced_trace_identity(inst, p).passes(1e-8));
    }
  }
}

TEST(Identities, NonconstantPotentialsWithMu) {
  for (const char* name : {"s3-log-eigen", "h3-log-cosh"}) {
    for (double mu : {1.0, 0.5, -2.0}) {
      const auto inst = make_instance(name, params(1.3, 0.4, {}, mu));
      double grad_scale = 0.0;
      for (const auto& p : sample_points(inst.domain, 20, 6)) {
        EXPECT_LE(residual_norms(inst, p).max_abs, 1e-8) << name;
        EXPECT_TRUE(check_trace_identity(inst, p).passes(1e-8)) << name;
        const auto g = check_gradient_identity(inst, p);
        EXPECT_TRUE(g.passes(1e-6)) << name;
        grad_scale = std::max(grad_scale, std::abs(g.rhs));
        EXPECT_TRUE(check_laplacian_identity(inst, p).passes(1e-4)) << name;
      }
      // both sides of the gradient identity are genuinely nonzero here
      EXPECT_GT(grad_scale, 0.1) << name;
    }
  }
}

TEST(Identities, ReducedFormsRejectMu) {
  const auto inst = make_instance("s3-log-eigen");
  const ChartPoint p{0.6, 0.0, 0.0};
  EXPECT_EQ(code_of([&] { check_reduced_trace_identity(inst, p); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { check_reduced_gradient_identity(inst, p); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { check_reduced_laplacian_identity(inst, p); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { check_splitting_identity(inst, p); }), ErrorCode::InvalidArgument);
}

TEST(SplittingIdentity, GaussianClosedForm) {
  // 1/2 Delta (lambda^2 r^2) = 3 lambda^2 = |Hess f|^2
  const double lambda = 2.0;
  const auto inst = make_instance("gaussian", params({}, {}, lambda, {}));
  for (const auto& p : sample_points(inst.domain, 10, 7)) {
    const auto r = check_splitting_identity(inst, p);
    EXPECT_NEAR(r.lhs, 3.0 * lambda * lambda, 1e-12);
    EXPECT_NEAR(r.rhs, 3.0 * lambda * lambda, 1e-12);
  }
}

TEST(SplittingIdentity, EinsteinAndProduct) {
  for (const char* name : {"einstein-s3", "s2xr", "flat-product"}) {
    const auto inst = make_instance(name);
    for (const auto& p : sample_points(inst.domain, 10, 8)) {
      const auto r = check_splitting_identity(inst, p);
      EXPECT_NEAR(r.lhs, 0.0, 1e-12) << name;
      EXPECT_TRUE(r.passes(1e-5)) << name;
    }
  }
  const auto degenerate = make_instance("gaussian", params(2.0, 1.0, 1.0, {}));
  EXPECT_EQ(code_of([&] { check_splitting_identity(degenerate, {0.0, 0.0, 0.0}); }),
            ErrorCode::DegenerateDenominator);
}

TEST(AffineFlags, ProductSplitting) {
  const auto inst = make_instance("s2xr");
  const auto pts = sample_points(inst.domain, 50, 9);
  const auto flags = check_affine_splitting_flags(inst, pts);
  EXPECT_LE(flags.hessian_norm, 1e-9);
  EXPECT_LE(flags.grad_norm_variation, 1e-9);
  EXPECT_TRUE(flags.affine && flags.constant_gradient);

  SolitonInstance square = inst;
  square.kind = Grys{ScalarField([](const auto& x) { return x[2] * x[2]; })};
  const auto sq = check_affine_splitting_flags(square, pts);
  EXPECT_NEAR(sq.hessian_norm, 2.0, 1e-12);
  EXPECT_FALSE(sq.affine);

  SolitonInstance flat = inst;
  flat.kind = Grys{ScalarField::constant(4.0)};
  const auto c = check_affine_splitting_flags(flat, pts);
  EXPECT_EQ(c.hessian_norm, 0.0);
  EXPECT_EQ(c.grad_norm_variation, 0.0);
}

TEST(SteadyRicciFlat, FlatProduct) {
  const auto inst = make_instance("flat-product");
  const auto f = check_steady_ricci_flat(inst, sample_points(inst.domain, 20, 10));
  EXPECT_TRUE(f.ricci_flat);
  EXPECT_TRUE(f.steady);
  const auto s3 = make_instance("einstein-s3");
  const auto g = check_steady_ricci_flat(s3, sample_points(s3.domain, 5, 10));
  EXPECT_FALSE(g.ricci_flat);
  EXPECT_FALSE(g.steady);
}

TEST(CompactScalar, BalancedSphere) {
  // alpha 1, beta 2: lambda = 3 beta - 2 alpha = 4, predicted 2 n lambda / (n beta - 2 alpha) = 24 / 4
  const auto inst = make_instance("einstein-s3", params(1.0, 2.0, {}, {}));
  ASSERT_DOUBLE_EQ(inst.params.lambda, 4.0);
  const auto pts = sample_points(inst.domain, 50, 11);
  const auto c = check_compact_scalar_constant(inst, pts);
  EXPECT_DOUBLE_EQ(c.predicted, 6.0);
  EXPECT_LE(c.gap, 1e-9);
  EXPECT_TRUE(c.sign_law_applies);
  EXPECT_TRUE(c.sign_consistent);
  EXPECT_EQ(c.lambda_class, SolitonClass::Expanding);
  EXPECT_TRUE(c.holds);
}

TEST(CompactScalar, NegativeControlAndGuards) {
  const auto inst = make_instance("einstein-s3", params(1.0, 2.0, 0.0, {}));
  const auto pts = sample_points(inst.domain, 20, 12);
  const auto c = check_compact_scalar_constant(inst, pts);
  EXPECT_DOUBLE_EQ(c.predicted, 0.0);
  EXPECT_NEAR(c.gap, 6.0, 1e-9);
  EXPECT_FALSE(c.holds);
  EXPECT_FALSE(c.sign_consistent);

  const auto degenerate = make_instance("einstein-s3", params(3.0, 2.0, {}, {}));
  EXPECT_EQ(code_of([&] { check_compact_scalar_constant(degenerate, pts); }), ErrorCode::DegenerateDenominator);
  EXPECT_EQ(code_of([&] { check_compact_scalar_constant(make_instance("einstein-h3"), pts); }),
            ErrorCode::NotCompact);
  EXPECT_EQ(code_of([&] { check_compact_scalar_constant(inst, {}); }), ErrorCode::InvalidArgument);
}

TEST(UniversalIdentities, CatalogMetrics) {
  for (const auto& e : catalog_entries()) {
    const ScalarField f = random_polynomial(e.dim(), 3, 31);
    for (const auto& chart : e.charts) {
      for (const auto& p : sample_points(chart, 10, 13)) {
        EXPECT_TRUE(bianchi_residual(e.metric, p).passes(1e-6)) << e.name;
        EXPECT_TRUE(commutation_residual(e.metric, f, p).passes(1e-6)) << e.name;
        EXPECT_TRUE(bochner_residual(e.metric, f, p).passes(1e-6)) << e.name;
      }
    }
  }
}

TEST(UniversalIdentities, BochnerSidesAreNontrivial) {
  const auto e = make_perturbed_flat(1e-2, 2);
  const ScalarField f = random_polynomial(3, 4, 8);
  const ChartPoint p{0.1, -0.2, 0.3};
  const auto r = bochner_residual(e.metric, f, p);
  EXPECT_GT(std::abs(r.lhs), 1e-3);
}

}  // namespace
}  // namespace rys
