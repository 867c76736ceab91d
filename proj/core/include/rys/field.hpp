#pragma once

#include <concepts>
#include <functional>
#include <memory>
#include <span>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "rys/chart.hpp"
#include "rys/dual.hpp"
#include "rys/jet.hpp"

namespace rys {

/// Scalar types every field must evaluate on: plain values, Taylor jets and
/// nested duals up to depth four.
template <class T>
concept FieldScalar = std::same_as<T, double> || std::same_as<T, Jet> || std::same_as<T, Dual1> ||
                      std::same_as<T, Dual2> || std::same_as<T, Dual3> || std::same_as<T, Dual4>;

/// Element type of the coordinate span handed to a generic field lambda.
template <class Coords>
using scalar_of = std::remove_cvref_t<decltype(std::declval<const Coords&>()[0])>;

namespace detail {

template <class T>
using ScalarFn = std::function<T(std::span<const T>)>;
template <class T>
using ArrayFn = std::function<std::vector<T>(std::span<const T>)>;

template <template <class> class Fn>
using FnSet = std::tuple<Fn<double>, Fn<Jet>, Fn<Dual1>, Fn<Dual2>, Fn<Dual3>, Fn<Dual4>>;

template <template <class> class Fn, class F>
std::shared_ptr<const FnSet<Fn>> make_fn_set(const F& f) {
  return std::make_shared<const FnSet<Fn>>(Fn<double>(f), Fn<Jet>(f), Fn<Dual1>(f), Fn<Dual2>(f), Fn<Dual3>(f),
                                           Fn<Dual4>(f));
}

}  // namespace detail

/// Smooth real function on a chart, given as a generic callable
/// `[](const auto& x) { ... }` over a std::span of coordinates. The callable
/// is instantiated once per FieldScalar so the same closed form drives value
/// evaluation, jets and nested duals. Evaluation must be pure.
class ScalarField {
 public:
  ScalarField() = default;

  template <class F>
    requires(!std::same_as<std::remove_cvref_t<F>, ScalarField>)
  explicit ScalarField(const F& f) : fns_(detail::make_fn_set<detail::ScalarFn>(f)) {}

  static ScalarField constant(double c);
  /// a*f + b*g
  static ScalarField linear_combination(double a, const ScalarField& f, double b, const ScalarField& g);

  template <FieldScalar T>
  T operator()(std::span<const T> x) const {
    return std::get<detail::ScalarFn<T>>(*fns_)(x);
  }
  double operator()(const ChartPoint& p) const { return (*this)(p.coords()); }

  explicit operator bool() const noexcept { return fns_ != nullptr; }

 private:
  std::shared_ptr<const detail::FnSet<detail::ScalarFn>> fns_;
};

/// n smooth components on a chart. Tag distinguishes contravariant vector
/// fields from covariant one-forms; the storage is identical.
template <class Tag>
class ComponentField {
 public:
  ComponentField() = default;

  template <class F>
    requires(!std::same_as<std::remove_cvref_t<F>, ComponentField>)
  ComponentField(int components, const F& f) : components_(components), fns_(detail::make_fn_set<detail::ArrayFn>(f)) {}

  int components() const noexcept { return components_; }

  template <FieldScalar T>
  std::vector<T> operator()(std::span<const T> x) const {
    auto v = std::get<detail::ArrayFn<T>>(*fns_)(x);
    v.resize(static_cast<std::size_t>(components_), T(0.0));
    return v;
  }
  std::vector<double> operator()(const ChartPoint& p) const { return (*this)(p.coords()); }

  /// The i-th component as a scalar field.
  ScalarField component(int i) const {
    auto self = *this;
    return ScalarField([self, i](const auto& x) {
      using T = scalar_of<decltype(x)>;
      return self(std::span<const T>(x.data(), x.size()))[static_cast<std::size_t>(i)];
    });
  }

  explicit operator bool() const noexcept { return fns_ != nullptr; }

 private:
  int components_ = 0;
  std::shared_ptr<const detail::FnSet<detail::ArrayFn>> fns_;
};

struct VectorTag {};
struct OneFormTag {};
using VectorField = ComponentField<VectorTag>;
using OneFormField = ComponentField<OneFormTag>;

/// Riemannian metric components g_ij on a chart. The callable returns the n*n
/// row-major matrix; only the upper triangle is read and mirrored, so the
/// result is symmetric by construction.
class MetricField {
 public:
  MetricField() = default;

  template <class F>
    requires(!std::same_as<std::remove_cvref_t<F>, MetricField>)
  MetricField(int dim, const F& f) : dim_(dim), fns_(detail::make_fn_set<detail::ArrayFn>(f)) {}

  /// Euclidean metric in n dimensions.
  static MetricField flat(int dim);
  /// Conformally flat metric factor(x) * delta_ij.
  static MetricField conformal(int dim, const ScalarField& factor);
  /// c^2 * g
  MetricField scaled(double c) const;

  int dim() const noexcept { return dim_; }

  template <FieldScalar T>
  std::vector<T> operator()(std::span<const T> x) const {
    auto m = std::get<detail::ArrayFn<T>>(*fns_)(x);
    const auto n = static_cast<std::size_t>(dim_);
    m.resize(n * n, T(0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) m[i * n + j] = m[j * n + i];
    }
    return m;
  }
  std::vector<double> operator()(const ChartPoint& p) const { return (*this)(p.coords()); }

  /// g_ij as a scalar field.
  ScalarField component(int i, int j) const;

  explicit operator bool() const noexcept { return fns_ != nullptr; }

 private:
  int dim_ = 0;
  std::shared_ptr<const detail::FnSet<detail::ArrayFn>> fns_;
};

/// Scalar field on a chart obtained by composing an ambient field with a map
/// chart -> ambient space.
ScalarField pullback(const ScalarField& ambient, const VectorField& embedding);

}  // namespace rys
