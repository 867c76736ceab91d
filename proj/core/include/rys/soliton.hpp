#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "rys/chart.hpp"
#include "rys/curvature.hpp"
#include "rys/field.hpp"

namespace rys {

/// Constants of the soliton equation
///   alpha Ric + (1/2) L_X g + (lambda - beta R / 2) g [+ mu eta (x) eta] = 0.
struct SolitonParams {
  double alpha = 1.0;
  double beta = 0.0;
  double lambda = 0.0;
  double mu = 0.0;

  /// Throws InvalidArgument on non-finite entries.
  void validate() const;

  bool is_proper() const noexcept { return alpha != 0.0 && alpha != 1.0; }
  bool is_ricci_soliton() const noexcept { return alpha == 1.0 && beta == 0.0; }
  bool is_yamabe_soliton() const noexcept { return alpha == 0.0 && beta == 2.0; }
  /// rho of a rho-Einstein soliton (alpha = 1, beta = 2 rho).
  std::optional<double> rho_einstein() const noexcept {
    if (alpha == 1.0) return beta / 2.0;
    return std::nullopt;
  }
  /// mu alpha = -1 kills the Ric(grad f, .) coefficient of the gradient identity.
  bool mu_alpha_degenerate() const noexcept;
};

enum class SolitonClass { Expanding, Steady, Shrinking };

std::string_view to_string(SolitonClass c) noexcept;

/// |lambda| at or below this counts as steady.
inline constexpr double kSteadyTolerance = 1e-12;
/// Residual tolerance for exact catalog solitons.
inline constexpr double kExactResidualTolerance = 1e-8;
/// Residual tolerance for quantities built from 3rd/4th derivatives.
inline constexpr double kHighOrderResidualTolerance = 1e-5;

SolitonClass classify(const SolitonParams& params) noexcept;

/// Soliton vector field X.
struct Rys {
  VectorField field;
};
/// Gradient soliton, X = grad f.
struct Grys {
  ScalarField potential;
};
/// X plus a one-form eta entering through mu eta (x) eta.
struct EtaRys {
  VectorField field;
  OneFormField eta;
};
/// Gradient soliton with the mu df (x) df term.
struct GenGrys {
  ScalarField potential;
};

using SolitonKind = std::variant<Rys, Grys, EtaRys, GenGrys>;

/// One chart's worth of a soliton candidate.
struct SolitonInstance {
  SolitonParams params;
  ChartDomain domain;
  MetricField metric;
  SolitonKind kind;
  /// Set for instances living on a compact catalog entry.
  bool compact = false;

  bool is_gradient() const noexcept {
    return std::holds_alternative<Grys>(kind) || std::holds_alternative<GenGrys>(kind);
  }
  /// Throws WrongKind for Rys / EtaRys.
  const ScalarField& potential() const;
  /// mu for GenGrys; 0 for every other kind.
  double effective_mu() const noexcept;
};

Sym2Tensor rys_residual(const SolitonInstance& inst, const ChartPoint& p);
Sym2Tensor grys_residual(const SolitonInstance& inst, const ChartPoint& p);
Sym2Tensor eta_rys_residual(const SolitonInstance& inst, const ChartPoint& p);
Sym2Tensor gen_grys_residual(const SolitonInstance& inst, const ChartPoint& p);

/// Residual of whichever equation inst.kind selects.
Sym2Tensor soliton_residual(const SolitonInstance& inst, const ChartPoint& p);
/// Same, reusing a LocalGeometry of order >= 2 built at the point.
Sym2Tensor soliton_residual(const SolitonInstance& inst, const LocalGeometry& geo);

struct ResidualNorms {
  double max_abs = 0.0;
  double g_norm = 0.0;
};

ResidualNorms residual_norms(const SolitonInstance& inst, const ChartPoint& p);

/// nabla X - phi Id as a (1,1) matrix (row i, column j holds nabla_j X^i).
Eigen::MatrixXd concircular_defect(const MetricField& g, const VectorField& x, const ScalarField& phi,
                                   const ChartPoint& p);

/// Largest |phi(p) - phi(q)| over the sample set.
double phi_variation(const ScalarField& phi, std::span<const ChartPoint> points);

struct ConcircularConclusions {
  /// max |Ric - (R/n) g|
  double einstein_defect = 0.0;
  double measured_scalar = 0.0;
  /// 2n(lambda + phi) / (beta - 2 alpha)
  std::optional<double> scalar_prediction;
  /// (beta R - 2 phi - 2 lambda) / (2 alpha), the Ricci-operator eigenvalue
  double eigenvalue_prediction = 0.0;
  /// max over the coordinate basis of |Q e_j - eigenvalue e_j|
  double eigen_residual = 0.0;
  /// Class from phi against (beta - 2 alpha) R / (2n).
  SolitonClass threshold_class = SolitonClass::Steady;
  /// Class from the sign of lambda.
  SolitonClass lambda_class = SolitonClass::Steady;
};

/// Consequences of a soliton whose field is concircular with constant factor
/// phi. Throws AlphaZero when alpha = 0 and, if the scalar prediction is
/// requested, DegenerateBeta when beta = 2 alpha.
ConcircularConclusions concircular_conclusions(const MetricField& g, const SolitonParams& params, double phi,
                                               const ChartPoint& p, bool predict_scalar = true);

}  // namespace rys
