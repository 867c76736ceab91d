#pragma once

#include <span>
#include <string>

#include "rys/chart.hpp"
#include "rys/curvature.hpp"
#include "rys/field.hpp"
#include "rys/soliton.hpp"

namespace rys {

/// One scalar comparison lhs = rhs at a point.
/// rel_gap = |lhs - rhs| / (1 + max(|lhs|, |rhs|)).
struct IdentityResidual {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  ChartPoint point;

  static IdentityResidual make(std::string name, double lhs, double rhs, ChartPoint p);
  /// Picks the component with the largest gap.
  static IdentityResidual worst_component(std::string name, const Eigen::VectorXd& lhs, const Eigen::VectorXd& rhs,
                                          ChartPoint p);
  bool passes(double tol) const noexcept { return rel_gap <= tol; }
};

/// Tolerance ladder keyed by the highest derivative order involved.
struct Tolerances {
  double soliton = kExactResidualTolerance;
  double order2 = 1e-8;
  double order3 = 1e-6;
  double order4 = 1e-4;
  double splitting = 1e-5;
  double flags = 1e-9;
};

/// Throws NotASoliton when the defining residual at p exceeds tol (max-abs).
void require_soliton(const SolitonInstance& inst, const ChartPoint& p, double tol = kExactResidualTolerance);

/// alpha R + Delta f + (lambda - beta R / 2) n + mu |grad f|^2 = 0
IdentityResidual check_trace_identity(const SolitonInstance& inst, const ChartPoint& p, const Tolerances& tol = {});
/// {alpha - beta(n-1)} dR + 2 mu {alpha R + (lambda - beta R / 2)(n-1)} df = 2(mu alpha + 1) Ric(grad f, .)
IdentityResidual check_gradient_identity(const SolitonInstance& inst, const ChartPoint& p,
                                         const Tolerances& tol = {});
/// {alpha - beta(n-1)} Delta R + {2 mu alpha - 2 mu beta (n-1) - 1} g(grad R, grad f)
///   = 2 mu {alpha R + (n-1)(lambda - beta R / 2)}{alpha R + n(lambda - beta R / 2)}
///     - 2(mu alpha + 1){alpha |Ric|^2 + R(lambda - beta R / 2)}
IdentityResidual check_laplacian_identity(const SolitonInstance& inst, const ChartPoint& p,
                                          const Tolerances& tol = {});

/// The mu = 0 forms. Throw InvalidArgument on an instance with mu != 0.
IdentityResidual check_reduced_trace_identity(const SolitonInstance& inst, const ChartPoint& p,
                                              const Tolerances& tol = {});
/// {alpha - beta(n-1)} dR = 2 Ric(grad f, .)
IdentityResidual check_reduced_gradient_identity(const SolitonInstance& inst, const ChartPoint& p,
                                                 const Tolerances& tol = {});
/// {alpha - beta(n-1)} Delta R = g(grad R, grad f) - 2{alpha |Ric|^2 + R(lambda - beta R / 2)}
IdentityResidual check_reduced_laplacian_identity(const SolitonInstance& inst, const ChartPoint& p,
                                                  const Tolerances& tol = {});

/// 1/2 Delta |grad f|^2 = |Hess f|^2 + (beta - alpha)/(alpha - beta(n-1)) Ric(grad f, grad f)
/// for a mu = 0 gradient soliton. DegenerateDenominator when alpha = beta(n-1).
IdentityResidual check_splitting_identity(const SolitonInstance& inst, const ChartPoint& p,
                                          const Tolerances& tol = {});

struct CompactScalarCheck {
  /// 2 n lambda / (n beta - 2 alpha)
  double predicted = 0.0;
  /// max |R - predicted| over the samples
  double gap = 0.0;
  double measured_at_worst = 0.0;
  ChartPoint worst;
  SolitonClass lambda_class = SolitonClass::Steady;
  /// Sign law only applies for n beta > 2 alpha.
  bool sign_law_applies = false;
  /// R < 0, = 0, > 0 for shrinking, steady, expanding (vacuous when the law does not apply).
  bool sign_consistent = true;
  bool holds = false;
};

/// Scalar curvature of a compact generalized gradient soliton is the constant
/// 2 n lambda / (n beta - 2 alpha). Throws NotCompact for a non-compact
/// instance and DegenerateDenominator when |n beta - 2 alpha| <= 1e-12.
CompactScalarCheck check_compact_scalar_constant(const SolitonInstance& inst, std::span<const ChartPoint> points,
                                                 double tol = 1e-9);

struct AffineSplittingFlags {
  /// max over samples of max |Hess f|_ij
  double hessian_norm = 0.0;
  /// max - min of |grad f| over samples
  double grad_norm_variation = 0.0;
  bool affine = false;
  bool constant_gradient = false;
};

AffineSplittingFlags check_affine_splitting_flags(const SolitonInstance& inst, std::span<const ChartPoint> points,
                                                  double tol = 1e-9);

struct SteadyRicciFlatFlags {
  double ricci_max = 0.0;
  double lambda = 0.0;
  bool ricci_flat = false;
  bool steady = false;
};

SteadyRicciFlatFlags check_steady_ricci_flat(const SolitonInstance& inst, std::span<const ChartPoint> points,
                                             double tol = 1e-9);

/// g^jk nabla_k R_ij against (1/2) d_i R. Needs no soliton structure.
IdentityResidual bianchi_residual(const MetricField& g, const ChartPoint& p);
/// Delta nabla_i f against nabla_i Delta f + R_ij grad^j f.
IdentityResidual commutation_residual(const MetricField& g, const ScalarField& f, const ChartPoint& p);
/// 1/2 Delta |grad f|^2 against |Hess f|^2 + Ric(grad f, grad f) + g(grad f, grad Delta f).
IdentityResidual bochner_residual(const MetricField& g, const ScalarField& f, const ChartPoint& p);

}  // namespace rys
