#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rys/catalog.hpp"
#include "rys/identities.hpp"
#include "rys/soliton.hpp"

namespace rys {

struct QuadratureOptions {
  /// Gauss-Legendre nodes per axis and panel, >= 8.
  int resolution = 24;
  /// Centre of the overlap annulus is |x| = 2^overlap_shift in the first
  /// chart; the second chart uses -overlap_shift.
  double overlap_shift = 0.3;
};

/// Nodes of one chart. weights already include the Gauss-Legendre weight,
/// the spherical Jacobian, the partition-of-unity weight and sqrt(det g).
struct ChartNodes {
  std::vector<ChartPoint> points;
  std::vector<double> weights;
  std::vector<double> partition;
};

struct QuadratureGrid {
  std::vector<ChartNodes> charts;
  int resolution = 0;

  std::size_t size() const noexcept;
  double total_weight() const;
};

/// Throws NotCompact unless the entry is a compact two-chart stereographic
/// atlas, InvalidArgument for resolution < 8.
QuadratureGrid make_grid(const CatalogEntry& entry, const QuadratureOptions& options = {});

/// Smooth step: 0 for t <= -1, 1 for t >= 1, S(t) + S(-t) = 1.
double smooth_step(double t);

using ChartIntegrand = std::function<double(std::size_t chart, const ChartPoint& x)>;

/// Integrand values at every node, charts in order.
std::vector<double> evaluate(const QuadratureGrid& grid, const ChartIntegrand& integrand);
/// sum of weight * value with compensated summation in node order.
double weighted_sum(const QuadratureGrid& grid, std::span<const double> values);

double integrate(const QuadratureGrid& grid, const ChartIntegrand& integrand);
double integrate(const CatalogEntry& entry, const ChartIntegrand& integrand, const QuadratureOptions& options = {});
/// Integrates a field given on the ambient space through the entry's embeddings.
double integrate(const CatalogEntry& entry, const ScalarField& ambient, const QuadratureOptions& options = {});
double volume(const CatalogEntry& entry, const QuadratureOptions& options = {});

/// One chart expression per chart of the entry for an ambient field.
std::vector<ScalarField> chart_pullbacks(const CatalogEntry& entry, const ScalarField& ambient);

struct IntegralInequality {
  double k = 0.0;
  /// k * int R^2
  double lhs = 0.0;
  /// int Ric(grad f, grad f)
  double rhs = 0.0;
  bool holds = false;
};

/// k int R^2 >= int Ric(grad f, grad f), k = (n-1)/n (beta n / 2 - alpha)^2,
/// for a compact steady gradient soliton. potentials holds the potential in
/// each chart; empty means inst.potential() in every chart. Throws NotSteady,
/// NotCompact, NotASoliton.
IntegralInequality check_integral_inequality(const SolitonInstance& inst, const CatalogEntry& entry,
                                             std::span<const ScalarField> potentials = {},
                                             const QuadratureOptions& options = {});

/// int |Hess f|^2 + (beta - alpha)/(alpha - beta(n-1)) int Ric(grad f, grad f) = 0
/// on a compact gradient soliton with mu = 0. Throws NotCompact,
/// DegenerateDenominator, NotASoliton.
IdentityResidual check_hessian_energy(const SolitonInstance& inst, const CatalogEntry& entry,
                                      std::span<const ScalarField> potentials = {},
                                      const QuadratureOptions& options = {});

}  // namespace rys
