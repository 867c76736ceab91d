#include "rys/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "rys/curvature.hpp"
#include "rys/error.hpp"
#include "rys/parallel.hpp"

namespace rys {
namespace {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre on [-1, 1] by Newton iteration on P_n.
Rule gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    r.nodes[lo] = -x;
    r.nodes[hi] = x;
    r.weights[lo] = w;
    r.weights[hi] = w;
  }
  if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  cache.emplace(n, r);
  return r;
}

double bump_half(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

/// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> v) {
  double sum = 0.0;
  double c = 0.0;
  for (double x : v) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

ChartNodes chart_nodes(const MetricField& metric, int n, double shift) {
  const Rule gl = gauss_legendre(n);
  struct Radial {
    double rho;
    double weight;
    double psi;
  };
  std::vector<Radial> radial;
  const double inner = std::exp2(shift - 1.0);
  for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
    const double rho = 0.5 * inner * (gl.nodes[k] + 1.0);
    radial.push_back({rho, 0.5 * inner * gl.weights[k], 1.0});
  }
  // transition panel in t = log2 rho over [shift - 1, shift + 1]
  for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
    const double t = shift + gl.nodes[k];
    const double rho = std::exp2(t);
    radial.push_back({rho, gl.weights[k] * rho * std::numbers::ln2, smooth_step(shift - t)});
  }

  ChartNodes out;
  const std::size_t total = radial.size() * gl.nodes.size() * gl.nodes.size();
  out.points.reserve(total);
  out.weights.reserve(total);
  out.partition.reserve(total);
  for (const auto& rad : radial) {
    for (std::size_t a = 0; a < gl.nodes.size(); ++a) {
      const double u = gl.nodes[a];
      const double s = std::sqrt(1.0 - u * u);
      for (std::size_t b = 0; b < gl.nodes.size(); ++b) {
        const double phi = std::numbers::pi * (gl.nodes[b] + 1.0);
        const double w_angle = gl.weights[a] * std::numbers::pi * gl.weights[b];
        ChartPoint x{rad.rho * s * std::cos(phi), rad.rho * s * std::sin(phi), rad.rho * u};
        const auto g = metric(x);
        const double det = Eigen::Map<const Eigen::Matrix3d>(g.data()).determinant();
        out.weights.push_back(rad.weight * rad.rho * rad.rho * w_angle * rad.psi * std::sqrt(det));
        out.partition.push_back(rad.psi);
        out.points.push_back(std::move(x));
      }
    }
  }
  return out;
}

std::vector<ScalarField> potentials_for(const SolitonInstance& inst, const CatalogEntry& entry,
                                        std::span<const ScalarField> potentials) {
  if (!potentials.empty()) {
    if (potentials.size() != entry.charts.size()) {
      throw Error(ErrorCode::InvalidArgument, "need one potential per chart");
    }
    return {potentials.begin(), potentials.end()};
  }
  return std::vector<ScalarField>(entry.charts.size(), inst.potential());
}

void require_compact(const SolitonInstance& inst, const CatalogEntry& entry) {
  if (!inst.compact || !entry.compact) throw Error(ErrorCode::NotCompact, "integral checks need a compact instance");
}

/// Defining residual at seeded points of every chart.
void verify_on_charts(const SolitonInstance& inst, const CatalogEntry& entry, const std::vector<ScalarField>& fs) {
  for (std::size_t c = 0; c < entry.charts.size(); ++c) {
    SolitonInstance local = inst;
    local.domain = entry.charts[c];
    local.metric = entry.metric;
    local.kind = inst.effective_mu() == 0.0 ? SolitonKind{Grys{fs[c]}} : SolitonKind{GenGrys{fs[c]}};
    for (const auto& p : sample_points(local.domain, 16, 11 + c)) require_soliton(local, p, kExactResidualTolerance);
  }
}

}  // namespace

double smooth_step(double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = bump_half(1.0 + t);
  const double b = bump_half(1.0 - t);
  return a / (a + b);
}

std::size_t QuadratureGrid::size() const noexcept {
  std::size_t n = 0;
  for (const auto& c : charts) n += c.points.size();
  return n;
}

double QuadratureGrid::total_weight() const {
  std::vector<double> all;
  all.reserve(size());
  for (const auto& c : charts) all.insert(all.end(), c.weights.begin(), c.weights.end());
  return compensated_sum(all);
}

QuadratureGrid make_grid(const CatalogEntry& entry, const QuadratureOptions& options) {
  if (!entry.compact) throw Error(ErrorCode::NotCompact, "entry '" + entry.name + "' is not compact");
  if (entry.charts.size() != 2 || entry.dim() != 3) {
    throw Error(ErrorCode::NotCompact, "quadrature supports the two-chart stereographic atlas of S^3");
  }
  if (options.resolution < 8) throw Error(ErrorCode::InvalidArgument, "quadrature resolution must be >= 8");
  if (!std::isfinite(options.overlap_shift) || std::abs(options.overlap_shift) > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "overlap shift must lie in [-1, 1]");
  }
  QuadratureGrid grid;
  grid.resolution = options.resolution;
  grid.charts.push_back(chart_nodes(entry.metric, options.resolution, options.overlap_shift));
  grid.charts.push_back(chart_nodes(entry.metric, options.resolution, -options.overlap_shift));
  return grid;
}

std::vector<double> evaluate(const QuadratureGrid& grid, const ChartIntegrand& integrand) {
  std::vector<std::pair<std::size_t, std::size_t>> index;
  index.reserve(grid.size());
  for (std::size_t c = 0; c < grid.charts.size(); ++c) {
    for (std::size_t k = 0; k < grid.charts[c].points.size(); ++k) index.emplace_back(c, k);
  }
  std::vector<double> values(index.size(), 0.0);
  parallel_for(values.size(), [&](std::size_t i) {
    const auto [c, k] = index[i];
    // nodes outside the chart's share contribute nothing; skip the evaluation
    if (grid.charts[c].weights[k] != 0.0) values[i] = integrand(c, grid.charts[c].points[k]);
  });
  return values;
}

double weighted_sum(const QuadratureGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw Error(ErrorCode::InvalidArgument, "one value per quadrature node expected");
  std::vector<double> terms;
  terms.reserve(values.size());
  std::size_t i = 0;
  for (const auto& chart : grid.charts) {
    for (double w : chart.weights) terms.push_back(w * values[i++]);
  }
  return compensated_sum(terms);
}

double integrate(const QuadratureGrid& grid, const ChartIntegrand& integrand) {
  return weighted_sum(grid, evaluate(grid, integrand));
}

double integrate(const CatalogEntry& entry, const ChartIntegrand& integrand, const QuadratureOptions& options) {
  return integrate(make_grid(entry, options), integrand);
}

std::vector<ScalarField> chart_pullbacks(const CatalogEntry& entry, const ScalarField& ambient) {
  if (entry.embeddings.size() != entry.charts.size()) {
    throw Error(ErrorCode::InvalidArgument, "entry '" + entry.name + "' has no ambient embedding");
  }
  std::vector<ScalarField> out;
  for (const auto& emb : entry.embeddings) out.push_back(pullback(ambient, emb));
  return out;
}

double integrate(const CatalogEntry& entry, const ScalarField& ambient, const QuadratureOptions& options) {
  const QuadratureGrid grid = make_grid(entry, options);
  const auto fs = chart_pullbacks(entry, ambient);
  return integrate(grid, [&](std::size_t c, const ChartPoint& x) { return fs[c](x); });
}

double volume(const CatalogEntry& entry, const QuadratureOptions& options) {
  return make_grid(entry, options).total_weight();
}

IntegralInequality check_integral_inequality(const SolitonInstance& inst, const CatalogEntry& entry,
                                             std::span<const ScalarField> potentials,
                                             const QuadratureOptions& options) {
  inst.params.validate();
  if (classify(inst.params) != SolitonClass::Steady) {
    throw Error(ErrorCode::NotSteady, "integral inequality needs a steady soliton (|lambda| <= 1e-12)");
  }
  require_compact(inst, entry);
  const auto fs = potentials_for(inst, entry, potentials);
  verify_on_charts(inst, entry, fs);

  const QuadratureGrid grid = make_grid(entry, options);
  const int n = entry.dim();
  const double a = inst.params.alpha;
  const double b = inst.params.beta;
  IntegralInequality out;
  out.k = (n - 1.0) / n * std::pow(0.5 * b * n - a, 2);
  const double r_sq = integrate(grid, [&](std::size_t, const ChartPoint& x) {
    const double r = scalar_curvature(entry.metric, x);
    return r * r;
  });
  out.lhs = out.k * r_sq;
  out.rhs = integrate(grid, [&](std::size_t c, const ChartPoint& x) {
    const LocalGeometry geo(entry.metric, x, 2);
    const Eigen::VectorXd df = values(geo.differential(geo.lift(fs[c], 1)));
    const Eigen::VectorXd grad = geo.inverse_value() * df;
    return grad.dot(geo.ricci().values() * grad);
  });
  const double scale = 1.0 + std::max(std::abs(out.lhs), std::abs(out.rhs));
  out.holds = out.lhs >= out.rhs - 1e-6 * scale;
  return out;
}

IdentityResidual check_hessian_energy(const SolitonInstance& inst, const CatalogEntry& entry,
                                      std::span<const ScalarField> potentials, const QuadratureOptions& options) {
  inst.params.validate();
  require_compact(inst, entry);
  if (inst.effective_mu() != 0.0) throw Error(ErrorCode::InvalidArgument, "hessian energy identity needs mu = 0");
  const int n = entry.dim();
  const double a = inst.params.alpha;
  const double b = inst.params.beta;
  const double denom = a - b * (n - 1);
  if (std::abs(denom) <= 1e-12) {
    throw Error(ErrorCode::DegenerateDenominator, "hessian energy identity needs alpha != beta (n - 1)");
  }
  const auto fs = potentials_for(inst, entry, potentials);
  verify_on_charts(inst, entry, fs);

  const QuadratureGrid grid = make_grid(entry, options);
  const double hess_sq = integrate(grid, [&](std::size_t c, const ChartPoint& x) {
    const LocalGeometry geo(entry.metric, x, 1);
    const JetMatrix h = geo.hessian(geo.lift(fs[c], 2));
    return geo.contract(h, h).value();
  });
  const double ric_ff = integrate(grid, [&](std::size_t c, const ChartPoint& x) {
    const LocalGeometry geo(entry.metric, x, 2);
    const Eigen::VectorXd df = values(geo.differential(geo.lift(fs[c], 1)));
    const Eigen::VectorXd grad = geo.inverse_value() * df;
    return grad.dot(geo.ricci().values() * grad);
  });
  return IdentityResidual::make("hessian-energy", hess_sq, -(b - a) / denom * ric_ff, ChartPoint{});
}

}  // namespace rys
