#include "rys/soliton.hpp"

#include <algorithm>
#include <cmath>

#include "rys/error.hpp"

namespace rys {

void SolitonParams::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(lambda) || !std::isfinite(mu)) {
    throw Error(ErrorCode::InvalidArgument, "soliton parameters must be finite");
  }
}

bool SolitonParams::mu_alpha_degenerate() const noexcept { return std::abs(mu * alpha + 1.0) <= 1e-12; }

std::string_view to_string(SolitonClass c) noexcept {
  switch (c) {
    case SolitonClass::Expanding: return "expanding";
    case SolitonClass::Steady: return "steady";
    case SolitonClass::Shrinking: return "shrinking";
  }
  return "unknown";
}

SolitonClass classify(const SolitonParams& params) noexcept {
  if (std::abs(params.lambda) <= kSteadyTolerance) return SolitonClass::Steady;
  return params.lambda > 0.0 ? SolitonClass::Expanding : SolitonClass::Shrinking;
}

const ScalarField& SolitonInstance::potential() const {
  if (const auto* g = std::get_if<Grys>(&kind)) return g->potential;
  if (const auto* g = std::get_if<GenGrys>(&kind)) return g->potential;
  throw Error(ErrorCode::WrongKind, "instance has no potential function");
}

double SolitonInstance::effective_mu() const noexcept {
  return std::holds_alternative<GenGrys>(kind) ? params.mu : 0.0;
}

namespace {

/// alpha Ric + (lambda - beta R / 2) g
Eigen::MatrixXd curvature_part(const SolitonParams& params, const LocalGeometry& geo) {
  const Eigen::MatrixXd g = geo.metric_value();
  const Eigen::MatrixXd ric = geo.ricci().values();
  const double r = geo.scalar().value();
  return params.alpha * ric + (params.lambda - 0.5 * params.beta * r) * g;
}

Eigen::MatrixXd half_lie_derivative(const LocalGeometry& geo, const VectorField& x) {
  const Eigen::MatrixXd nabla = geo.covariant_derivative(geo.lower(geo.lift(x, 1))).values();
  return 0.5 * (nabla + nabla.transpose());
}

Eigen::MatrixXd potential_hessian(const LocalGeometry& geo, const ScalarField& f) {
  return geo.hessian(geo.lift(f, 2)).values();
}

Eigen::VectorXd potential_differential(const LocalGeometry& geo, const ScalarField& f) {
  return values(geo.differential(geo.lift(f, 1)));
}

template <class Kind>
const Kind& expect(const SolitonInstance& inst, const char* name) {
  if (const auto* k = std::get_if<Kind>(&inst.kind)) return *k;
  throw Error(ErrorCode::WrongKind, std::string("instance is not of kind ") + name);
}

}  // namespace

Sym2Tensor soliton_residual(const SolitonInstance& inst, const LocalGeometry& geo) {
  const SolitonParams& prm = inst.params;
  Eigen::MatrixXd r = curvature_part(prm, geo);
  std::visit(
      [&](const auto& kind) {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, Rys>) {
          r += half_lie_derivative(geo, kind.field);
        } else if constexpr (std::is_same_v<K, Grys>) {
          r += potential_hessian(geo, kind.potential);
        } else if constexpr (std::is_same_v<K, EtaRys>) {
          r += half_lie_derivative(geo, kind.field);
          const Eigen::VectorXd eta = values(geo.lift(kind.eta, 0));
          r += prm.mu * eta * eta.transpose();
        } else {
          r += potential_hessian(geo, kind.potential);
          const Eigen::VectorXd df = potential_differential(geo, kind.potential);
          r += prm.mu * df * df.transpose();
        }
      },
      inst.kind);
  return Sym2Tensor(r);
}

Sym2Tensor soliton_residual(const SolitonInstance& inst, const ChartPoint& p) {
  return soliton_residual(inst, LocalGeometry(inst.metric, p, 2));
}

Sym2Tensor rys_residual(const SolitonInstance& inst, const ChartPoint& p) {
  expect<Rys>(inst, "RYS");
  return soliton_residual(inst, p);
}

Sym2Tensor grys_residual(const SolitonInstance& inst, const ChartPoint& p) {
  expect<Grys>(inst, "GRYS");
  return soliton_residual(inst, p);
}

Sym2Tensor eta_rys_residual(const SolitonInstance& inst, const ChartPoint& p) {
  expect<EtaRys>(inst, "eta-RYS");
  return soliton_residual(inst, p);
}

Sym2Tensor gen_grys_residual(const SolitonInstance& inst, const ChartPoint& p) {
  expect<GenGrys>(inst, "generalized GRYS");
  return soliton_residual(inst, p);
}

ResidualNorms residual_norms(const SolitonInstance& inst, const ChartPoint& p) {
  const LocalGeometry geo(inst.metric, p, 2);
  const Sym2Tensor r = soliton_residual(inst, geo);
  return {r.max_abs(), r.norm(geo.inverse_value())};
}

Eigen::MatrixXd concircular_defect(const MetricField& g, const VectorField& x, const ScalarField& phi,
                                   const ChartPoint& p) {
  const Eigen::MatrixXd nabla = covariant_derivative(g, x, p);
  return nabla - phi(p) * Eigen::MatrixXd::Identity(nabla.rows(), nabla.cols());
}

double phi_variation(const ScalarField& phi, std::span<const ChartPoint> points) {
  if (points.empty()) return 0.0;
  double lo = phi(points.front());
  double hi = lo;
  for (const auto& p : points) {
    const double v = phi(p);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

ConcircularConclusions concircular_conclusions(const MetricField& g, const SolitonParams& params, double phi,
                                               const ChartPoint& p, bool predict_scalar) {
  params.validate();
  if (params.alpha == 0.0) throw Error(ErrorCode::AlphaZero, "concircular conclusions need alpha != 0");
  const double denom = params.beta - 2.0 * params.alpha;
  if (predict_scalar && std::abs(denom) <= 1e-12) {
    throw Error(ErrorCode::DegenerateBeta, "scalar prediction needs beta != 2 alpha");
  }
  const LocalGeometry geo(g, p, 2);
  const int n = geo.dim();
  const Eigen::MatrixXd gv = geo.metric_value();
  const Eigen::MatrixXd ric = geo.ricci().values();
  const double r = geo.scalar().value();

  ConcircularConclusions out;
  out.measured_scalar = r;
  out.einstein_defect = (ric - (r / n) * gv).cwiseAbs().maxCoeff();
  if (predict_scalar) out.scalar_prediction = 2.0 * n * (params.lambda + phi) / denom;
  out.eigenvalue_prediction = (params.beta * r - 2.0 * phi - 2.0 * params.lambda) / (2.0 * params.alpha);

  const Eigen::MatrixXd q = geo.inverse_value() * ric;
  const Eigen::MatrixXd shifted = q - out.eigenvalue_prediction * Eigen::MatrixXd::Identity(n, n);
  // column j is (Q - ev) e_j
  out.eigen_residual = shifted.cwiseAbs().maxCoeff();

  const double threshold = denom * r / (2.0 * n);
  const double tol = kSteadyTolerance * std::max({1.0, std::abs(threshold), std::abs(phi)});
  if (std::abs(phi - threshold) <= tol) {
    out.threshold_class = SolitonClass::Steady;
  } else {
    out.threshold_class = phi < threshold ? SolitonClass::Expanding : SolitonClass::Shrinking;
  }
  out.lambda_class = classify(params);
  return out;
}

}  // namespace rys
