#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "rys/error.hpp"
#include "rys/solver.hpp"

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

RadialProfile profile_of(const SolitonParams& prm, const Background& bg, const RadialGrid& grid, auto&& f) {
  RadialProfile p;
  p.r = grid.points();
  for (double r : p.r) p.f.push_back(f(r));
  p.params = prm;
  p.background = bg;
  return p;
}

double inf_norm(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

TEST(Background, SpaceForms) {
  const Background flat{BackgroundKind::Flat, 1.0, 3};
  const Background sphere{BackgroundKind::Sphere, 2.0, 3};
  const Background hyp{BackgroundKind::Hyperbolic, 1.0, 3};
  EXPECT_EQ(flat.curvature(), 0.0);
  EXPECT_DOUBLE_EQ(sphere.curvature(), 0.25);
  EXPECT_DOUBLE_EQ(hyp.curvature(), -1.0);
  EXPECT_DOUBLE_EQ(sphere.scalar_curvature(), 1.5);
  EXPECT_DOUBLE_EQ(sphere.warp(1.0), 2.0 * std::sin(0.5));
  EXPECT_DOUBLE_EQ(hyp.warp_derivative(0.7), std::cosh(0.7));
  EXPECT_DOUBLE_EQ(sphere.r_limit(), 2.0 * std::numbers::pi);
  EXPECT_TRUE(std::isinf(flat.r_limit()));
  EXPECT_DOUBLE_EQ(Background({BackgroundKind::Sphere, 1.0, 3}).balanced_lambda({1.0, 1.0, 0.0, 0.0}), 1.0);
}

TEST(Background, Parse) {
  EXPECT_EQ(parse_background("flat"), BackgroundKind::Flat);
  EXPECT_EQ(parse_background("sphere"), BackgroundKind::Sphere);
  EXPECT_EQ(parse_background("hyperbolic"), BackgroundKind::Hyperbolic);
  EXPECT_EQ(code_of([] { parse_background("torus"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(to_string(BackgroundKind::Hyperbolic), "hyperbolic");
}

TEST(RadialResidual, GaussianIsExact) {
  const Background flat{BackgroundKind::Flat, 1.0, 3};
  const RadialGrid grid{1e-3, 2.0, 64};
  for (double lambda : {-1.5, 0.5, 2.0}) {
    const SolitonParams prm{1.0, 0.3, lambda, 0.0};
    const auto p = profile_of(prm, flat, grid, [lambda](double r) { return -0.5 * lambda * r * r; });
    EXPECT_LE(inf_norm(radial_residual(p)), 1e-10) << lambda;
  }
}

TEST(RadialResidual, ZeroProfileLeavesLambda) {
  const Background flat{BackgroundKind::Flat, 1.0, 3};
  const SolitonParams prm{1.0, 0.0, 0.75, 0.0};
  const auto p = profile_of(prm, flat, RadialGrid{}, [](double) { return 0.0; });
  const Eigen::VectorXd res = radial_residual(p);
  const auto n = static_cast<Eigen::Index>(p.r.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    EXPECT_DOUBLE_EQ(res[2 * k], 0.75);
    EXPECT_DOUBLE_EQ(res[2 * k + 1], 0.75);
  }
  EXPECT_EQ(res[2 * n], 0.0);
  const auto nodes = node_residuals(p);
  EXPECT_EQ(nodes.size(), p.r.size());
  EXPECT_DOUBLE_EQ(*std::max_element(nodes.begin(), nodes.end()), 0.75);
}

TEST(RadialResidual, ConstantOnBalancedSphere) {
  const Background sphere{BackgroundKind::Sphere, 1.0, 3};
  SolitonParams prm{1.3, 0.4, 0.0, 0.0};
  prm.lambda = sphere.balanced_lambda(prm);
  EXPECT_NEAR(prm.lambda, 3.0 * 0.4 - 2.0 * 1.3, 1e-15);
  const auto p = profile_of(prm, sphere, RadialGrid{1e-3, 2.0, 40}, [](double) { return 0.2; });
  // stencil weights grow like 1/h^2, so rounding on a constant profile is ~1e-13
  EXPECT_LE(inf_norm(radial_residual(p)), 1e-11);
}

TEST(RadialResidual, JacobianMatchesCentralDifferences) {
  const Background sphere{BackgroundKind::Sphere, 1.5, 3};
  const SolitonParams prm{1.0, 0.5, 0.3, 0.0};
  const auto p = profile_of(prm, sphere, RadialGrid{1e-3, 2.0, 32}, [](double r) { return std::sin(r) - 0.3 * r * r; });
  const Eigen::MatrixXd jac = radial_jacobian(p);
  const double h = 1e-4;
  for (std::size_t k = 0; k < p.f.size(); ++k) {
    RadialProfile up = p;
    RadialProfile down = p;
    up.f[k] += h;
    down.f[k] -= h;
    const Eigen::VectorXd col = (radial_residual(up) - radial_residual(down)) / (2.0 * h);
    const double scale = 1.0 + jac.col(static_cast<Eigen::Index>(k)).cwiseAbs().maxCoeff();
    EXPECT_LE((col - jac.col(static_cast<Eigen::Index>(k))).cwiseAbs().maxCoeff() / scale, 1e-6) << k;
  }
}

TEST(RadialResidual, GaugeInvariant) {
  const Background hyp{BackgroundKind::Hyperbolic, 1.0, 3};
  const SolitonParams prm{1.0, 0.0, -2.0, 0.0};
  const RadialGrid grid{1e-3, 1.5, 48};
  const auto a = profile_of(prm, hyp, grid, [](double r) { return std::cosh(r); });
  const auto b = profile_of(prm, hyp, grid, [](double r) { return std::cosh(r) + 3.25; });
  EXPECT_LE(inf_norm(radial_residual(a) - radial_residual(b)), 1e-9);
}

TEST(RadialResidual, Guards) {
  const Background flat{BackgroundKind::Flat, 1.0, 3};
  EXPECT_EQ(code_of([] { RadialGrid{1e-3, 2.0, 16}.points(); }), ErrorCode::GridTooCoarse);
  EXPECT_EQ(RadialGrid({1e-3, 2.0, 17}).points().size(), 17u);
  EXPECT_EQ(code_of([] { RadialGrid{2.0, 1.0, 32}.points(); }), ErrorCode::InvalidArgument);
  RadialProfile p;
  p.r = {0.1, 0.2, 0.3};
  p.f = {0.0, 0.0, 0.0};
  p.background = flat;
  EXPECT_EQ(code_of([&] { radial_residual(p); }), ErrorCode::GridTooCoarse);
  const Background sphere{BackgroundKind::Sphere, 1.0, 3};
  const auto past_antipode = profile_of({}, sphere, RadialGrid{1e-3, 4.0, 32}, [](double) { return 0.0; });
  EXPECT_EQ(code_of([&] { radial_residual(past_antipode); }), ErrorCode::InvalidArgument);
}

TEST(Solve, RecoversGaussian) {
  const Background flat{BackgroundKind::Flat, 1.0, 3};
  const RadialGrid grid{1e-3, 2.0, 128};
  const SolitonParams prm{1.0, 0.0, 2.0, 0.0};
  const SolveResult res = solve_radial(prm, flat, grid);
  EXPECT_LE(res.residual_inf, 1e-8);
  const double r0 = res.profile.r.front();
  double err = 0.0;
  for (std::size_t k = 0; k < res.profile.r.size(); ++k) {
    const double r = res.profile.r[k];
    err = std::max(err, std::abs(res.profile.f[k] + (r * r - r0 * r0)));
  }
  EXPECT_LE(err, 1e-6);
  EXPECT_EQ(res.profile.f.front(), 0.0);
}

TEST(Solve, SteadyFlatIsConstant) {
  const SolveResult res = solve_radial({1.0, 0.0, 0.0, 0.0}, {BackgroundKind::Flat, 1.0, 3}, RadialGrid{});
  for (double v : res.profile.f) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(res.iterations, 0);
}

TEST(Solve, ObjectiveIsMonotone) {
  const SolveResult res = solve_radial({1.0, 0.5, -1.0, 0.0}, {BackgroundKind::Flat, 1.0, 4}, RadialGrid{1e-3, 1.0, 64});
  ASSERT_GE(res.objective.size(), 2u);
  for (std::size_t k = 1; k < res.objective.size(); ++k) EXPECT_LE(res.objective[k], res.objective[k - 1]);
}

TEST(Solve, ConstantAnsatzOffBalanceFails) {
  const Background sphere{BackgroundKind::Sphere, 1.0, 3};
  const SolitonParams prm{1.0, 0.0, 1.0, 0.0};
  const double gap = std::abs(prm.lambda - sphere.balanced_lambda(prm));
  SolveOptions opt;
  opt.ansatz = Ansatz::Constant;
  try {
    solve_radial(prm, sphere, RadialGrid{1e-3, 2.0, 64}, opt);
    FAIL() << "expected NoConvergence";
  } catch (const NoConvergenceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
    EXPECT_NEAR(e.final_residual(), gap, 1e-12);
    EXPECT_EQ(e.partial().profile.f.size(), 64u);
  }
  SolitonParams balanced = prm;
  balanced.lambda = sphere.balanced_lambda(prm);
  EXPECT_LE(solve_radial(balanced, sphere, RadialGrid{1e-3, 2.0, 64}, opt).residual_inf, 1e-12);
}

TEST(Solve, FreeAnsatzOffBalanceSphereFails) {
  EXPECT_EQ(code_of([] { solve_radial({1.0, 0.0, 1.0, 0.0}, {BackgroundKind::Sphere, 1.0, 3}, RadialGrid{1e-3, 2.0, 48}); }),
            ErrorCode::NoConvergence);
}

TEST(Solve, RejectsMu) {
  EXPECT_EQ(code_of([] { solve_radial({1.0, 0.0, 1.0, 0.5}, {BackgroundKind::Flat, 1.0, 3}, RadialGrid{}); }),
            ErrorCode::InvalidArgument);
}

}  // namespace
}  // namespace rys
