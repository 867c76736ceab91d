#pragma once

#include <functional>
#include <span>

#include "rys/chart.hpp"
#include "rys/field.hpp"

namespace rys {

enum class DerivativeBackend {
  /// Nested forward-mode duals, one seeded level per index.
  NestedDual,
  /// Truncated Taylor jet of the whole field.
  TaylorJet,
  /// Central differences with two Richardson levels (cross-check only).
  FiniteDifference,
};

inline constexpr int kMaxDerivativeOrder = 4;

/// Mixed partial d^k f / dx_{i1} ... dx_{ik} at p for multi_index = {i1..ik}.
/// The order of indices is irrelevant. Throws StencilOutOfDomain when p is
/// within the stencil margin of the boundary and OrderTooHigh for k > 4.
double partial_derivative(const ScalarField& field, const ChartDomain& domain, const ChartPoint& p,
                          std::span<const int> multi_index,
                          DerivativeBackend backend = DerivativeBackend::NestedDual);

using PlainFunction = std::function<double(std::span<const double>)>;

/// Finite-difference partial of an arbitrary value-only function. Base step is
/// domain.step(axis); each index applies a central difference extrapolated over
/// h, h/2, h/4.
double finite_difference_partial(const PlainFunction& f, const ChartDomain& domain, const ChartPoint& p,
                                 std::span<const int> multi_index);

}  // namespace rys
