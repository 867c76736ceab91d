#include "rys/chart.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "rys/error.hpp"

namespace rys {

ChartPoint::ChartPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  for (double c : coords_) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "chart point has a non-finite coordinate");
  }
}

ChartDomain::ChartDomain(std::string label, std::vector<Interval> bounds)
    : label_(std::move(label)), bounds_(std::move(bounds)) {
  if (bounds_.size() < 2) throw Error(ErrorCode::InvalidArgument, "chart '" + label_ + "' needs dim >= 2");
  for (const Interval& iv : bounds_) {
    if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper) || !(iv.width() > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "chart '" + label_ + "' has an empty or non-finite interval");
    }
  }
}

ChartDomain ChartDomain::box(std::string label, int dim, double lower, double upper) {
  return ChartDomain(std::move(label), std::vector<Interval>(static_cast<std::size_t>(dim), Interval{lower, upper}));
}

bool ChartDomain::contains(const ChartPoint& p) const {
  if (p.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (!(p[i] > bound(i).lower && p[i] < bound(i).upper)) return false;
  }
  return true;
}

bool ChartDomain::contains_with_margin(const ChartPoint& p) const {
  if (p.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    // A relative slack keeps points produced by sample_points on the inside.
    const double m = margin(i) * (1.0 - 1e-12);
    if (p[i] < bound(i).lower + m || p[i] > bound(i).upper - m) return false;
  }
  return true;
}

void ChartDomain::require_interior(const ChartPoint& p) const {
  if (p.dim() != dim()) {
    throw Error(ErrorCode::InvalidArgument, "point dimension " + std::to_string(p.dim()) + " differs from chart '" +
                                                label_ + "' dimension " + std::to_string(dim()));
  }
  if (!contains_with_margin(p)) {
    throw Error(ErrorCode::StencilOutOfDomain, "point closer than the stencil margin to the boundary of '" + label_ + "'");
  }
}

std::vector<ChartPoint> sample_points(const ChartDomain& domain, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<ChartPoint> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> x(static_cast<std::size_t>(domain.dim()));
    for (int i = 0; i < domain.dim(); ++i) {
      // 53 random bits -> [0, 1); avoids the implementation-defined
      // uniform_real_distribution so lists match across standard libraries.
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const double lo = domain.bound(i).lower + domain.margin(i);
      const double hi = domain.bound(i).upper - domain.margin(i);
      x[static_cast<std::size_t>(i)] = lo + u * (hi - lo);
    }
    out.emplace_back(std::move(x));
  }
  return out;
}

}  // namespace rys
