#include "rys/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rys/error.hpp"

namespace rys {

IdentityResidual IdentityResidual::make(std::string name, double lhs, double rhs, ChartPoint p) {
  IdentityResidual r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_gap = std::abs(lhs - rhs);
  r.rel_gap = r.abs_gap / (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
  r.point = std::move(p);
  return r;
}

IdentityResidual IdentityResidual::worst_component(std::string name, const Eigen::VectorXd& lhs,
                                                   const Eigen::VectorXd& rhs, ChartPoint p) {
  Eigen::Index worst = 0;
  double gap = -1.0;
  for (Eigen::Index i = 0; i < lhs.size(); ++i) {
    const double rel = std::abs(lhs[i] - rhs[i]) / (1.0 + std::max(std::abs(lhs[i]), std::abs(rhs[i])));
    if (rel > gap) {
      gap = rel;
      worst = i;
    }
  }
  return make(std::move(name), lhs[worst], rhs[worst], std::move(p));
}

namespace {

/// Point values shared by the soliton identities.
struct Snapshot {
  int n = 0;
  double r = 0.0;
  double ric_sq = 0.0;
  Eigen::MatrixXd ric;
  Eigen::VectorXd df;
  Eigen::VectorXd grad;
  double lap_f = 0.0;
  double grad_sq = 0.0;
  Eigen::VectorXd dr;
  double lap_r = 0.0;
};

Snapshot snapshot(const LocalGeometry& geo, const ScalarField& f) {
  Snapshot s;
  s.n = geo.dim();
  s.ric = geo.ricci().values();
  s.r = geo.scalar().value();
  s.ric_sq = geo.contract(geo.ricci(), geo.ricci()).value();
  const Jet fj = geo.lift(f, 2);
  s.df = values(geo.differential(fj));
  s.grad = geo.inverse_value() * s.df;
  s.grad_sq = s.df.dot(s.grad);
  s.lap_f = geo.laplacian(fj).value();
  if (geo.order() >= 3) s.dr = values(geo.differential(geo.scalar()));
  if (geo.order() >= 4) s.lap_r = geo.laplacian(geo.scalar()).value();
  return s;
}

LocalGeometry verified_geometry(const SolitonInstance& inst, const ChartPoint& p, int order, double tol) {
  inst.params.validate();
  LocalGeometry geo(inst.metric, p, order);
  const double res = soliton_residual(inst, geo).max_abs();
  if (!(res <= tol)) {
    throw Error(ErrorCode::NotASoliton, "defining residual " + std::to_string(res) + " exceeds " +
                                            std::to_string(tol) + " at the sample point");
  }
  return geo;
}

void require_mu_zero(const SolitonInstance& inst) {
  if (inst.effective_mu() != 0.0) throw Error(ErrorCode::InvalidArgument, "reduced identity needs mu = 0");
}

IdentityResidual trace_identity(const Snapshot& s, const SolitonParams& prm, double mu, const ChartPoint& p,
                                const char* name) {
  const double lhs = prm.alpha * s.r + s.lap_f + (prm.lambda - 0.5 * prm.beta * s.r) * s.n + mu * s.grad_sq;
  return IdentityResidual::make(name, lhs, 0.0, p);
}

IdentityResidual gradient_identity(const Snapshot& s, const SolitonParams& prm, double mu, const ChartPoint& p,
                                   const char* name) {
  const double a = prm.alpha;
  const double b = prm.beta;
  const int n = s.n;
  const double shift = prm.lambda - 0.5 * b * s.r;
  const Eigen::VectorXd lhs = (a - b * (n - 1)) * s.dr + 2.0 * mu * (a * s.r + shift * (n - 1)) * s.df;
  const Eigen::VectorXd rhs = 2.0 * (mu * a + 1.0) * (s.ric * s.grad);
  return IdentityResidual::worst_component(name, lhs, rhs, p);
}

IdentityResidual laplacian_identity(const Snapshot& s, const SolitonParams& prm, double mu, const ChartPoint& p,
                                    const char* name) {
  const double a = prm.alpha;
  const double b = prm.beta;
  const int n = s.n;
  const double shift = prm.lambda - 0.5 * b * s.r;
  const double dr_df = s.dr.dot(s.grad);
  const double lhs = (a - b * (n - 1)) * s.lap_r + (2.0 * mu * a - 2.0 * mu * b * (n - 1) - 1.0) * dr_df;
  const double rhs = 2.0 * mu * (a * s.r + (n - 1) * shift) * (a * s.r + n * shift) -
                     2.0 * (mu * a + 1.0) * (a * s.ric_sq + s.r * shift);
  return IdentityResidual::make(name, lhs, rhs, p);
}

}  // namespace

void require_soliton(const SolitonInstance& inst, const ChartPoint& p, double tol) {
  verified_geometry(inst, p, 2, tol);
}

IdentityResidual check_trace_identity(const SolitonInstance& inst, const ChartPoint& p, const Tolerances& tol) {
  const LocalGeometry geo = verified_geometry(inst, p, 2, tol.soliton);
  return trace_identity(snapshot(geo, inst.potential()), inst.params, inst.effective_mu(), p, "trace");
}

IdentityResidual check_gradient_identity(const SolitonInstance& inst, const ChartPoint& p, const Tolerances& tol) {
  const LocalGeometry geo = verified_geometry(inst, p, 3, tol.soliton);
  return gradient_identity(snapshot(geo, inst.potential()), inst.params, inst.effective_mu(), p, "gradient");
}

IdentityResidual check_laplacian_identity(const SolitonInstance& inst, const ChartPoint& p, const Tolerances& tol) {
  const LocalGeometry geo = verified_geometry(inst, p, 4, tol.soliton);
  return laplacian_identity(snapshot(geo, inst.potential()), inst.params, inst.effective_mu(), p, "laplacian");
}

IdentityResidual check_reduced_trace_identity(const SolitonInstance& inst, const ChartPoint& p,
                                              const Tolerances& tol) {
  require_mu_zero(inst);
  const LocalGeometry geo = verified_geometry(inst, p, 2, tol.soliton);
  return trace_identity(snapshot(geo, inst.potential()), inst.params, 0.0, p, "reduced-trace");
}

IdentityResidual check_reduced_gradient_identity(const SolitonInstance& inst, const ChartPoint& p,
                                                 const Tolerances& tol) {
  require_mu_zero(inst);
  const LocalGeometry geo = verified_geometry(inst, p, 3, tol.soliton);
  return gradient_identity(snapshot(geo, inst.potential()), inst.params, 0.0, p, "reduced-gradient");
}

IdentityResidual check_reduced_laplacian_identity(const SolitonInstance& inst, const ChartPoint& p,
                                                  const Tolerances& tol) {
  require_mu_zero(inst);
  const LocalGeometry geo = verified_geometry(inst, p, 4, tol.soliton);
  return laplacian_identity(snapshot(geo, inst.potential()), inst.params, 0.0, p, "reduced-laplacian");
}

IdentityResidual check_splitting_identity(const SolitonInstance& inst, const ChartPoint& p, const Tolerances& tol) {
  require_mu_zero(inst);
  const int n = inst.domain.dim();
  const double a = inst.params.alpha;
  const double b = inst.params.beta;
  const double denom = a - b * (n - 1);
  if (std::abs(denom) <= 1e-12) {
    throw Error(ErrorCode::DegenerateDenominator, "splitting identity needs alpha != beta (n - 1)");
  }
  const LocalGeometry geo = verified_geometry(inst, p, 3, tol.soliton);
  const Jet fj = geo.lift(inst.potential(), 3);
  const JetVector df = geo.differential(fj);
  const double lhs = 0.5 * geo.laplacian(geo.inner(df, df)).value();

  const JetMatrix hess = geo.hessian(fj);
  const double hess_sq = geo.contract(hess, hess).value();
  const Eigen::VectorXd grad = geo.inverse_value() * values(df);
  const double ric_ff = grad.dot(geo.ricci().values() * grad);
  const double rhs = hess_sq + (b - a) / denom * ric_ff;
  return IdentityResidual::make("splitting", lhs, rhs, p);
}

CompactScalarCheck check_compact_scalar_constant(const SolitonInstance& inst, std::span<const ChartPoint> points,
                                                 double tol) {
  if (!inst.compact) throw Error(ErrorCode::NotCompact, "constant scalar curvature check needs a compact instance");
  inst.params.validate();
  const int n = inst.domain.dim();
  const double denom = n * inst.params.beta - 2.0 * inst.params.alpha;
  if (std::abs(denom) <= 1e-12) throw Error(ErrorCode::DegenerateDenominator, "needs n beta != 2 alpha");
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "no sample points");

  CompactScalarCheck out;
  out.predicted = 2.0 * n * inst.params.lambda / denom;
  out.lambda_class = classify(inst.params);
  out.sign_law_applies = denom > 0.0;
  out.gap = -1.0;
  bool sign_ok = true;
  for (const auto& p : points) {
    const double r = scalar_curvature(inst.metric, p);
    const double gap = std::abs(r - out.predicted);
    if (gap > out.gap) {
      out.gap = gap;
      out.measured_at_worst = r;
      out.worst = p;
    }
    if (out.sign_law_applies) {
      switch (out.lambda_class) {
        case SolitonClass::Shrinking: sign_ok = sign_ok && r < -tol; break;
        case SolitonClass::Steady: sign_ok = sign_ok && std::abs(r) <= tol; break;
        case SolitonClass::Expanding: sign_ok = sign_ok && r > tol; break;
      }
    }
  }
  out.sign_consistent = sign_ok;
  out.holds = out.gap <= tol && sign_ok;
  return out;
}

AffineSplittingFlags check_affine_splitting_flags(const SolitonInstance& inst, std::span<const ChartPoint> points,
                                                  double tol) {
  const ScalarField& f = inst.potential();
  AffineSplittingFlags out;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : points) {
    out.hessian_norm = std::max(out.hessian_norm, hessian(inst.metric, f, p).max_abs());
    const double len = std::sqrt(std::max(0.0, grad_norm_sq(inst.metric, f, p)));
    lo = std::min(lo, len);
    hi = std::max(hi, len);
  }
  out.grad_norm_variation = points.empty() ? 0.0 : hi - lo;
  out.affine = out.hessian_norm <= tol;
  out.constant_gradient = out.grad_norm_variation <= tol;
  return out;
}

SteadyRicciFlatFlags check_steady_ricci_flat(const SolitonInstance& inst, std::span<const ChartPoint> points,
                                             double tol) {
  SteadyRicciFlatFlags out;
  for (const auto& p : points) out.ricci_max = std::max(out.ricci_max, ricci(inst.metric, p).max_abs());
  out.lambda = inst.params.lambda;
  out.ricci_flat = out.ricci_max <= tol;
  out.steady = classify(inst.params) == SolitonClass::Steady;
  return out;
}

IdentityResidual bianchi_residual(const MetricField& g, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 3);
  const Eigen::VectorXd div = values(geo.divergence(geo.ricci()));
  const Eigen::VectorXd half_dr = 0.5 * values(geo.differential(geo.scalar()));
  return IdentityResidual::worst_component("bianchi", div, half_dr, p);
}

IdentityResidual commutation_residual(const MetricField& g, const ScalarField& f, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 3);
  const Jet fj = geo.lift(f, 3);
  // Delta of the 1-form df is the divergence of the (symmetric) Hessian
  const Eigen::VectorXd lhs = values(geo.divergence(geo.hessian(fj)));
  const Eigen::VectorXd d_lap = values(geo.differential(geo.laplacian(fj)));
  const Eigen::VectorXd grad = geo.inverse_value() * values(geo.differential(fj));
  const Eigen::VectorXd rhs = d_lap + geo.ricci().values() * grad;
  return IdentityResidual::worst_component("commutation", lhs, rhs, p);
}

IdentityResidual bochner_residual(const MetricField& g, const ScalarField& f, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 3);
  const Jet fj = geo.lift(f, 3);
  const JetVector df = geo.differential(fj);
  const double lhs = 0.5 * geo.laplacian(geo.inner(df, df)).value();

  const JetMatrix hess = geo.hessian(fj);
  const Eigen::VectorXd grad = geo.inverse_value() * values(df);
  const double ric_ff = grad.dot(geo.ricci().values() * grad);
  const Eigen::VectorXd d_lap = values(geo.differential(geo.laplacian(fj)));
  const double rhs = geo.contract(hess, hess).value() + ric_ff + grad.dot(d_lap);
  return IdentityResidual::make("bochner", lhs, rhs, p);
}

}  // namespace rys
