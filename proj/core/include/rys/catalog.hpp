#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rys/chart.hpp"
#include "rys/field.hpp"
#include "rys/soliton.hpp"

namespace rys {

/// Known curvature of a catalog metric.
struct ClosedForms {
  std::optional<double> scalar;
  /// c with Ric = c g, for Einstein metrics.
  std::optional<double> einstein;
  /// Full Ricci tensor at a chart point, when not Einstein.
  std::function<Eigen::MatrixXd(const ChartPoint&)> ricci;
  std::optional<double> volume;
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  MetricField metric;
  /// All charts share the metric's coordinate expression.
  std::vector<ChartDomain> charts;
  bool compact = false;
  ClosedForms closed_forms;
  /// Per chart map into R^{ambient_dim}, when the entry is a submanifold.
  std::vector<VectorField> embeddings;
  int ambient_dim = 0;

  int dim() const noexcept { return metric.dim(); }
  const ChartDomain& chart(std::size_t i = 0) const { return charts.at(i); }
};

/// Fixed registry in a stable order.
const std::vector<CatalogEntry>& catalog_entries();
/// Throws UnknownCase.
const CatalogEntry& find_entry(std::string_view name);

CatalogEntry make_flat(int dim);
/// Round S^3 of the given radius on two stereographic charts.
CatalogEntry make_sphere(double radius);
/// g = delta + epsilon h on (-1, 1)^3 with h a seeded symmetric matrix of
/// cubic polynomials. Throws InvalidArgument for epsilon < 0 and NotSPD when
/// g fails the SPD / conditioning test on the sample set.
CatalogEntry make_perturbed_flat(double epsilon, std::uint64_t seed);

/// Seeded polynomial of total degree <= degree with coefficients in
/// [-scale, scale] (higher degrees damped by 2^-k).
ScalarField random_polynomial(int dim, int degree, std::uint64_t seed, double scale = 1.0);

/// x / |x|^2, the change between the two stereographic charts.
ChartPoint stereographic_transition(const ChartPoint& x);

/// Overrides for the free constants of a case. Unset values take the case
/// defaults; for balanced cases an unset lambda is solved from the others.
struct ParamOverrides {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> lambda;
  std::optional<double> mu;
};

struct CatalogCase {
  std::string name;
  std::string entry;
  std::string summary;
  bool gradient = true;
  std::function<SolitonInstance(const ParamOverrides&)> build;
  /// phi with nabla X = phi Id, for cases whose field is concircular.
  ScalarField concircular_factor;
  /// The potential has vanishing Hessian (the metric splits off a line).
  bool affine_potential = false;
  /// Ricci-flat and steady by construction.
  bool ricci_flat_steady = false;
};

const std::vector<CatalogCase>& catalog_cases();
/// Throws UnknownCase.
const CatalogCase& find_case(std::string_view name);
SolitonInstance make_instance(std::string_view case_name, const ParamOverrides& overrides = {});

}  // namespace rys
