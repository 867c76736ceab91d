#include "rys/derivative.hpp"

#include <string>
#include <type_traits>
#include <vector>

#include "rys/error.hpp"

namespace rys {
namespace {

void validate(const ChartDomain& domain, const ChartPoint& p, std::span<const int> multi_index) {
  domain.require_interior(p);
  if (static_cast<int>(multi_index.size()) > kMaxDerivativeOrder) {
    throw Error(ErrorCode::OrderTooHigh,
                "derivative order " + std::to_string(multi_index.size()) + " exceeds " +
                    std::to_string(kMaxDerivativeOrder));
  }
  for (int axis : multi_index) {
    if (axis < 0 || axis >= domain.dim()) throw Error(ErrorCode::InvalidArgument, "coordinate index out of range");
  }
}

/// Lifts a coordinate into Dual^k. active[l] seeds the eps slot of nesting
/// level l (0 = outermost) when that index differentiates this coordinate.
template <class D>
D lift(double value, std::span<const bool> active) {
  if constexpr (std::is_same_v<D, double>) {
    return value;
  } else {
    using Inner = decltype(D{}.re);
    return D(lift<Inner>(value, active.subspan(1)), active[0] ? Inner(1.0) : Inner(0.0));
  }
}

template <class D>
double innermost(const D& d) {
  if constexpr (std::is_same_v<D, double>) {
    return d;
  } else {
    return innermost(d.eps);
  }
}

template <class D>
double dual_partial(const ScalarField& field, const ChartPoint& p, std::span<const int> multi_index) {
  const int n = p.dim();
  const int depth = static_cast<int>(multi_index.size());
  std::vector<D> x;
  x.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    bool flags[kMaxDerivativeOrder] = {};
    for (int level = 0; level < depth; ++level) flags[level] = (multi_index[level] == i);
    x.push_back(lift<D>(p[i], std::span<const bool>(flags, static_cast<std::size_t>(depth))));
  }
  return innermost(field(std::span<const D>(x)));
}

double jet_partial(const ScalarField& field, const ChartPoint& p, std::span<const int> multi_index) {
  const int n = p.dim();
  const int order = static_cast<int>(multi_index.size());
  std::vector<Jet> x;
  x.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x.push_back(Jet::variable(n, order, i, p[i]));
  const Jet value = field(std::span<const Jet>(x)).shaped(n, order);
  return value.partial(multi_index);
}

double richardson_first(const std::function<double(double)>& g, double h) {
  auto central = [&](double step) { return (g(step) - g(-step)) / (2.0 * step); };
  const double d1 = central(h);
  const double d2 = central(h / 2.0);
  const double d4 = central(h / 4.0);
  const double e12 = (4.0 * d2 - d1) / 3.0;
  const double e24 = (4.0 * d4 - d2) / 3.0;
  return (16.0 * e24 - e12) / 15.0;
}

double fd_recursive(const PlainFunction& f, const ChartDomain& domain, std::vector<double>& x,
                    std::span<const int> multi_index) {
  if (multi_index.empty()) return f(std::span<const double>(x));
  const int axis = multi_index.front();
  const auto rest = multi_index.subspan(1);
  const double origin = x[static_cast<std::size_t>(axis)];
  auto shifted = [&](double offset) {
    x[static_cast<std::size_t>(axis)] = origin + offset;
    const double v = fd_recursive(f, domain, x, rest);
    x[static_cast<std::size_t>(axis)] = origin;
    return v;
  };
  return richardson_first(shifted, domain.step(axis));
}

}  // namespace

double finite_difference_partial(const PlainFunction& f, const ChartDomain& domain, const ChartPoint& p,
                                 std::span<const int> multi_index) {
  validate(domain, p, multi_index);
  std::vector<double> x(p.coords().begin(), p.coords().end());
  return fd_recursive(f, domain, x, multi_index);
}

double partial_derivative(const ScalarField& field, const ChartDomain& domain, const ChartPoint& p,
                          std::span<const int> multi_index, DerivativeBackend backend) {
  validate(domain, p, multi_index);
  switch (backend) {
    case DerivativeBackend::NestedDual:
      switch (multi_index.size()) {
        case 0: return field(p);
        case 1: return dual_partial<Dual1>(field, p, multi_index);
        case 2: return dual_partial<Dual2>(field, p, multi_index);
        case 3: return dual_partial<Dual3>(field, p, multi_index);
        default: return dual_partial<Dual4>(field, p, multi_index);
      }
    case DerivativeBackend::TaylorJet:
      return jet_partial(field, p, multi_index);
    case DerivativeBackend::FiniteDifference:
      return finite_difference_partial([&field](std::span<const double> x) { return field(x); }, domain, p,
                                       multi_index);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown derivative backend");
}

}  // namespace rys
