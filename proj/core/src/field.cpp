#include "rys/field.hpp"

namespace rys {

ScalarField ScalarField::constant(double c) {
  return ScalarField([c](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return T(c);
  });
}

ScalarField ScalarField::linear_combination(double a, const ScalarField& f, double b, const ScalarField& g) {
  return ScalarField([a, f, b, g](const auto& x) { return a * f(x) + b * g(x); });
}

MetricField MetricField::flat(int dim) {
  return MetricField(dim, [dim](const auto& x) {
    using T = scalar_of<decltype(x)>;
    const auto n = static_cast<std::size_t>(dim);
    std::vector<T> m(n * n, T(0.0));
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = T(1.0);
    return m;
  });
}

MetricField MetricField::conformal(int dim, const ScalarField& factor) {
  return MetricField(dim, [dim, factor](const auto& x) {
    using T = scalar_of<decltype(x)>;
    const auto n = static_cast<std::size_t>(dim);
    const T w = factor(x);
    std::vector<T> m(n * n, T(0.0));
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = w;
    return m;
  });
}

MetricField MetricField::scaled(double c) const {
  auto self = *this;
  const double c2 = c * c;
  return MetricField(dim_, [self, c2](const auto& x) {
    auto m = self(x);
    for (auto& v : m) v *= c2;
    return m;
  });
}

ScalarField MetricField::component(int i, int j) const {
  auto self = *this;
  const auto idx = static_cast<std::size_t>(i * dim_ + j);
  return ScalarField([self, idx](const auto& x) { return self(x)[idx]; });
}

ScalarField pullback(const ScalarField& ambient, const VectorField& embedding) {
  return ScalarField([ambient, embedding](const auto& x) {
    using T = scalar_of<decltype(x)>;
    const std::vector<T> y = embedding(x);
    return ambient(std::span<const T>(y));
  });
}

}  // namespace rys
