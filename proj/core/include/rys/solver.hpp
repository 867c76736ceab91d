#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rys/error.hpp"
#include "rys/soliton.hpp"

namespace rys {

enum class BackgroundKind { Flat, Sphere, Hyperbolic };

/// Rotationally symmetric space form dr^2 + phi(r)^2 g_{S^{n-1}}.
struct Background {
  BackgroundKind kind = BackgroundKind::Flat;
  /// Sphere radius a (phi = a sin(r/a)) or hyperbolic scale (phi = a sinh(r/a)).
  double radius = 1.0;
  int dim = 3;

  /// Sectional curvature K.
  double curvature() const;
  double scalar_curvature() const { return dim * (dim - 1) * curvature(); }
  double warp(double r) const;
  double warp_derivative(double r) const;
  /// Largest admissible r (the antipode for the sphere, infinity otherwise).
  double r_limit() const;

  /// lambda making constant f a soliton: (n-1)K (beta n / 2 - alpha).
  double balanced_lambda(const SolitonParams& params) const;
};

/// Parses "flat", "sphere", "hyperbolic". Throws InvalidArgument.
BackgroundKind parse_background(std::string_view name);
std::string_view to_string(BackgroundKind kind) noexcept;

struct RadialGrid {
  double delta = 1e-3;
  double r_max = 2.0;
  int nodes = 128;

  /// Uniform r_0 = delta .. r_{nodes-1} = r_max. Throws GridTooCoarse for
  /// fewer than 17 nodes and InvalidArgument for a bad interval.
  std::vector<double> points() const;
};

struct RadialProfile {
  std::vector<double> r;
  std::vector<double> f;
  SolitonParams params;
  Background background;
};

/// Rows: for every node the radial-radial and tangential blocks of
///   alpha Ric + Hess f + (lambda - beta R / 2) g
/// (orthonormal frame), then the regularity row f'(r_0) - r_0 f''(r_0).
/// Derivatives are fourth-order finite differences. GridTooCoarse for fewer
/// than 17 nodes.
Eigen::VectorXd radial_residual(const RadialProfile& profile);
/// d residual / d f_k for every node value (the map is affine in f).
Eigen::MatrixXd radial_jacobian(const RadialProfile& profile);
/// max(|rr|, |tt|) at each node.
std::vector<double> node_residuals(const RadialProfile& profile);

enum class Ansatz { Free, Constant };

struct SolveOptions {
  int max_iterations = 500;
  double tolerance = 1e-8;
  Ansatz ansatz = Ansatz::Free;
};

struct SolveResult {
  RadialProfile profile;
  int iterations = 0;
  double residual_inf = 0.0;
  /// 1/2 |residual|^2 after every accepted step, starting with the initial value.
  std::vector<double> objective;
};

/// Thrown when Levenberg-Marquardt stops above tolerance.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, double residual, SolveResult partial);
  double final_residual() const noexcept { return residual_; }
  const SolveResult& partial() const noexcept { return partial_; }

 private:
  double residual_;
  SolveResult partial_;
};

/// Levenberg-Marquardt on 1/2 |radial_residual|^2 with the gauge f(r_0) = 0.
/// init.r fixes the grid; init.params / init.background are ignored in
/// favour of the explicit arguments.
SolveResult solve_radial(const SolitonParams& params, const Background& background, const RadialProfile& init,
                         const SolveOptions& options = {});

/// Convenience: zero initial profile on grid.points().
SolveResult solve_radial(const SolitonParams& params, const Background& background, const RadialGrid& grid,
                         const SolveOptions& options = {});

}  // namespace rys
