#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rys {

/// Coordinates of a point in one chart.
class ChartPoint {
 public:
  ChartPoint() = default;
  explicit ChartPoint(std::vector<double> coords);
  ChartPoint(std::initializer_list<double> coords) : ChartPoint(std::vector<double>(coords)) {}

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const noexcept { return coords_; }

  friend bool operator==(const ChartPoint&, const ChartPoint&) = default;

 private:
  std::vector<double> coords_;
};

struct Interval {
  double lower;
  double upper;
  double width() const noexcept { return upper - lower; }
};

/// An open coordinate box. Every field in the library is evaluated on one.
class ChartDomain {
 public:
  /// Relative base step of the finite-difference stencil (per axis).
  static constexpr double kStepFraction = 1e-2;
  /// Interior margin in units of the base step.
  static constexpr double kMarginSteps = 5.0;

  ChartDomain(std::string label, std::vector<Interval> bounds);

  static ChartDomain box(std::string label, int dim, double lower, double upper);

  const std::string& label() const noexcept { return label_; }
  int dim() const noexcept { return static_cast<int>(bounds_.size()); }
  const Interval& bound(int axis) const { return bounds_[static_cast<std::size_t>(axis)]; }
  std::span<const Interval> bounds() const noexcept { return bounds_; }

  double step(int axis) const { return kStepFraction * bound(axis).width(); }
  double margin(int axis) const { return kMarginSteps * step(axis); }

  bool contains(const ChartPoint& p) const;
  /// True when p sits at least margin(axis) inside every face.
  bool contains_with_margin(const ChartPoint& p) const;

  /// Throws StencilOutOfDomain unless contains_with_margin(p).
  void require_interior(const ChartPoint& p) const;

 private:
  std::string label_;
  std::vector<Interval> bounds_;
};

/// Seeded uniform samples of the margin-shrunk box. The same (domain, count,
/// seed) yields the same list on every platform.
std::vector<ChartPoint> sample_points(const ChartDomain& domain, std::size_t count, std::uint64_t seed);

}  // namespace rys
