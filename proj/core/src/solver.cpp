#include "rys/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rys {

double Background::curvature() const {
  switch (kind) {
    case BackgroundKind::Flat: return 0.0;
    case BackgroundKind::Sphere: return 1.0 / (radius * radius);
    case BackgroundKind::Hyperbolic: return -1.0 / (radius * radius);
  }
  return 0.0;
}

double Background::warp(double r) const {
  switch (kind) {
    case BackgroundKind::Flat: return r;
    case BackgroundKind::Sphere: return radius * std::sin(r / radius);
    case BackgroundKind::Hyperbolic: return radius * std::sinh(r / radius);
  }
  return r;
}

double Background::warp_derivative(double r) const {
  switch (kind) {
    case BackgroundKind::Flat: return 1.0;
    case BackgroundKind::Sphere: return std::cos(r / radius);
    case BackgroundKind::Hyperbolic: return std::cosh(r / radius);
  }
  return 1.0;
}

double Background::r_limit() const {
  if (kind == BackgroundKind::Sphere) return std::numbers::pi * radius;
  return std::numeric_limits<double>::infinity();
}

double Background::balanced_lambda(const SolitonParams& params) const {
  return (dim - 1) * curvature() * (0.5 * params.beta * dim - params.alpha);
}

BackgroundKind parse_background(std::string_view name) {
  if (name == "flat") return BackgroundKind::Flat;
  if (name == "sphere") return BackgroundKind::Sphere;
  if (name == "hyperbolic") return BackgroundKind::Hyperbolic;
  throw Error(ErrorCode::InvalidArgument, "unknown background '" + std::string(name) + "'");
}

std::string_view to_string(BackgroundKind kind) noexcept {
  switch (kind) {
    case BackgroundKind::Flat: return "flat";
    case BackgroundKind::Sphere: return "sphere";
    case BackgroundKind::Hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

std::vector<double> RadialGrid::points() const {
  if (nodes < 17) {
    throw Error(ErrorCode::GridTooCoarse, "radial grid needs at least 16 intervals, got " + std::to_string(nodes - 1));
  }
  if (!(delta >= 0.0) || !(r_max > delta) || !std::isfinite(r_max)) {
    throw Error(ErrorCode::InvalidArgument, "radial grid needs 0 <= delta < r_max");
  }
  std::vector<double> r(static_cast<std::size_t>(nodes));
  const double h = (r_max - delta) / (nodes - 1);
  for (int k = 0; k < nodes; ++k) r[static_cast<std::size_t>(k)] = delta + k * h;
  r.back() = r_max;
  return r;
}

NoConvergenceError::NoConvergenceError(const std::string& what, double residual, SolveResult partial)
    : Error(ErrorCode::NoConvergence, what), residual_(residual), partial_(std::move(partial)) {}

namespace {

/// Fornberg weights for derivative `order` at x0 from the given nodes.
std::vector<double> fd_weights(double x0, std::span<const double> x, int order) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n), std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[i] = c[i][order];
  return w;
}

struct Stencil {
  int start;
  std::vector<double> w;
};

/// Fourth-order stencil for derivative `order` at node k: centred five points
/// in the interior, a clamped one-sided window near the ends.
Stencil stencil(std::span<const double> r, int k, int order) {
  const int n = static_cast<int>(r.size());
  const bool interior = k >= 2 && k <= n - 3;
  const int width = interior ? 5 : (order == 1 ? 5 : 6);
  const int start = interior ? k - 2 : std::clamp(k - width / 2, 0, n - width);
  return {start, fd_weights(r[k], r.subspan(static_cast<std::size_t>(start), static_cast<std::size_t>(width)), order)};
}

void require_profile(const RadialProfile& p) {
  if (p.r.size() != p.f.size()) throw Error(ErrorCode::InvalidArgument, "profile r and f differ in length");
  if (p.r.size() < 17) {
    throw Error(ErrorCode::GridTooCoarse, "radial grid needs at least 16 intervals, got " +
                                              std::to_string(static_cast<long>(p.r.size()) - 1));
  }
  for (std::size_t k = 1; k < p.r.size(); ++k) {
    if (!(p.r[k] > p.r[k - 1])) throw Error(ErrorCode::InvalidArgument, "radial grid must increase strictly");
  }
  if (!(p.r.front() > 0.0) || !(p.r.back() < p.background.r_limit())) {
    throw Error(ErrorCode::InvalidArgument, "radial grid must stay inside (0, r_limit)");
  }
  for (double v : p.f) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "profile values must be finite");
  }
}

/// Residual = J f + b; both built from the grid and parameters only.
struct Affine {
  Eigen::MatrixXd jac;
  Eigen::VectorXd offset;
};

Affine assemble(const RadialProfile& p) {
  require_profile(p);
  const std::span<const double> r(p.r);
  const int n = static_cast<int>(r.size());
  const Background& bg = p.background;
  const SolitonParams& prm = p.params;
  const double constant = prm.alpha * bg.curvature() * (bg.dim - 1) + prm.lambda - 0.5 * prm.beta * bg.scalar_curvature();

  Affine a{Eigen::MatrixXd::Zero(2 * n + 1, n), Eigen::VectorXd::Constant(2 * n + 1, constant)};
  for (int k = 0; k < n; ++k) {
    const Stencil d1 = stencil(r, k, 1);
    const Stencil d2 = stencil(r, k, 2);
    const double ratio = bg.warp_derivative(r[k]) / bg.warp(r[k]);
    for (std::size_t s = 0; s < d2.w.size(); ++s) a.jac(2 * k, d2.start + static_cast<int>(s)) += d2.w[s];
    for (std::size_t s = 0; s < d1.w.size(); ++s) a.jac(2 * k + 1, d1.start + static_cast<int>(s)) += ratio * d1.w[s];
  }
  const Stencil d1 = stencil(r, 0, 1);
  const Stencil d2 = stencil(r, 0, 2);
  for (std::size_t s = 0; s < d1.w.size(); ++s) a.jac(2 * n, d1.start + static_cast<int>(s)) += d1.w[s];
  for (std::size_t s = 0; s < d2.w.size(); ++s) a.jac(2 * n, d2.start + static_cast<int>(s)) -= r[0] * d2.w[s];
  a.offset[2 * n] = 0.0;
  return a;
}

double objective(const Eigen::VectorXd& res) { return 0.5 * res.squaredNorm(); }

double inf_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

Eigen::VectorXd radial_residual(const RadialProfile& profile) {
  const Affine a = assemble(profile);
  return a.jac * Eigen::Map<const Eigen::VectorXd>(profile.f.data(), static_cast<Eigen::Index>(profile.f.size())) +
         a.offset;
}

Eigen::MatrixXd radial_jacobian(const RadialProfile& profile) { return assemble(profile).jac; }

std::vector<double> node_residuals(const RadialProfile& profile) {
  const Eigen::VectorXd res = radial_residual(profile);
  std::vector<double> out(profile.r.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = std::max(std::abs(res[static_cast<Eigen::Index>(2 * k)]), std::abs(res[static_cast<Eigen::Index>(2 * k + 1)]));
  }
  return out;
}

SolveResult solve_radial(const SolitonParams& params, const Background& background, const RadialProfile& init,
                         const SolveOptions& options) {
  params.validate();
  if (params.mu != 0.0) throw Error(ErrorCode::InvalidArgument, "the radial solver handles mu = 0 only");
  if (background.dim < 2 || !(background.radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "background needs dim >= 2 and a positive radius");
  }
  RadialProfile prof = init;
  prof.params = params;
  prof.background = background;
  const Affine a = assemble(prof);
  const Eigen::Index n = static_cast<Eigen::Index>(prof.r.size());

  // Unknowns: f_1..f_{n-1} for the free ansatz (f_0 = 0 fixes the gauge); none
  // for the constant ansatz, whose only value is pinned by the same gauge.
  const Eigen::Index unknowns = options.ansatz == Ansatz::Free ? n - 1 : 0;
  const Eigen::MatrixXd jac = a.jac.rightCols(unknowns);
  Eigen::VectorXd x(unknowns);
  for (Eigen::Index k = 0; k < unknowns; ++k) x[k] = prof.f[static_cast<std::size_t>(k + 1)] - prof.f[0];

  auto residual_at = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return jac * v + a.offset; };
  auto unpack = [&](const Eigen::VectorXd& v) {
    prof.f.assign(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index k = 0; k < unknowns; ++k) prof.f[static_cast<std::size_t>(k + 1)] = v[k];
  };

  SolveResult result;
  Eigen::VectorXd res = residual_at(x);
  double obj = objective(res);
  result.objective.push_back(obj);

  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  const Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-12);
  double damping = 1e-3;
  int stalled = 0;
  int iter = 0;
  while (inf_norm(res) > options.tolerance && iter < options.max_iterations && unknowns > 0) {
    ++iter;
    const Eigen::VectorXd grad = jac.transpose() * res;
    Eigen::MatrixXd lhs = jtj;
    lhs.diagonal() += damping * diag;
    const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
    const Eigen::VectorXd trial = x + step;
    const Eigen::VectorXd trial_res = residual_at(trial);
    const double trial_obj = objective(trial_res);
    if (std::isfinite(trial_obj) && trial_obj <= obj) {
      const bool progress = trial_obj < obj * (1.0 - 1e-14);
      x = trial;
      res = trial_res;
      obj = trial_obj;
      result.objective.push_back(obj);
      damping = std::max(damping / 3.0, 1e-15);
      stalled = progress ? 0 : stalled + 1;
    } else {
      damping = std::min(damping * 4.0, 1e15);
      ++stalled;
    }
    // the least-squares minimum sits above tolerance: further steps cannot help
    if (stalled >= 25) break;
  }
  unpack(x);
  result.profile = prof;
  result.iterations = iter;
  result.residual_inf = inf_norm(res);
  if (!(result.residual_inf <= options.tolerance)) {
    const double final_res = result.residual_inf;
    throw NoConvergenceError("radial solve stopped at residual " + std::to_string(final_res) + " after " +
                                 std::to_string(iter) + " iterations",
                             final_res, std::move(result));
  }
  return result;
}

SolveResult solve_radial(const SolitonParams& params, const Background& background, const RadialGrid& grid,
                         const SolveOptions& options) {
  RadialProfile init;
  init.r = grid.points();
  init.f.assign(init.r.size(), 0.0);
  init.params = params;
  init.background = background;
  return solve_radial(params, background, init, options);
}

}  // namespace rys
