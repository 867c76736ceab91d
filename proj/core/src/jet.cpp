#include "rys/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rys/error.hpp"

namespace rys {
namespace {

constexpr int kCodeBase = kMaxJetOrder + 1;

struct Triple {
  std::int16_t a;
  std::int16_t b;
  std::int16_t c;
};

/// Monomial bookkeeping for one dimension, shared by every jet of that
/// dimension regardless of order (lower orders use a prefix).
struct Basis {
  int dim = 0;
  std::vector<std::array<int, kMaxJetDim>> exponents;
  std::vector<int> degree;
  std::array<int, kMaxJetOrder + 1> size_upto{};
  std::vector<int> lookup;
  std::vector<std::array<int, kMaxJetDim>> raised;
  std::vector<Triple> triples;
  std::array<int, kMaxJetOrder + 1> triples_end{};

  int code(const std::array<int, kMaxJetDim>& e) const {
    int c = 0;
    for (int i = dim - 1; i >= 0; --i) c = c * kCodeBase + e[i];
    return c;
  }
  int index_of(const std::array<int, kMaxJetDim>& e) const {
    int total = 0;
    for (int i = 0; i < dim; ++i) total += e[i];
    if (total > kMaxJetOrder) return -1;
    return lookup[code(e)];
  }
};

void enumerate(int dim, int axis, int remaining, std::array<int, kMaxJetDim>& e,
               std::vector<std::array<int, kMaxJetDim>>& out) {
  if (axis == dim - 1) {
    e[axis] = remaining;
    out.push_back(e);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    e[axis] = k;
    enumerate(dim, axis + 1, remaining - k, e, out);
  }
  e[axis] = 0;
}

Basis build_basis(int dim) {
  Basis b;
  b.dim = dim;
  if (dim == 0) {
    b.exponents.push_back({});
    b.degree.push_back(0);
    b.size_upto.fill(1);
    b.lookup = {0};
    b.raised.push_back({});
    b.triples.push_back({0, 0, 0});
    b.triples_end.fill(1);
    return b;
  }
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    std::array<int, kMaxJetDim> e{};
    enumerate(dim, 0, d, e, b.exponents);
    b.size_upto[d] = static_cast<int>(b.exponents.size());
  }
  int codes = 1;
  for (int i = 0; i < dim; ++i) codes *= kCodeBase;
  b.lookup.assign(codes, -1);
  for (int idx = 0; idx < static_cast<int>(b.exponents.size()); ++idx) {
    int deg = 0;
    for (int i = 0; i < dim; ++i) deg += b.exponents[idx][i];
    b.degree.push_back(deg);
    b.lookup[b.code(b.exponents[idx])] = idx;
  }
  b.raised.resize(b.exponents.size());
  for (std::size_t idx = 0; idx < b.exponents.size(); ++idx) {
    for (int axis = 0; axis < kMaxJetDim; ++axis) {
      if (axis >= dim) {
        b.raised[idx][axis] = -1;
        continue;
      }
      auto e = b.exponents[idx];
      e[axis] += 1;
      b.raised[idx][axis] = b.index_of(e);
    }
  }
  const int n = static_cast<int>(b.exponents.size());
  for (int ia = 0; ia < n; ++ia) {
    for (int ib = 0; ib < n; ++ib) {
      if (b.degree[ia] + b.degree[ib] > kMaxJetOrder) continue;
      std::array<int, kMaxJetDim> e{};
      for (int i = 0; i < dim; ++i) e[i] = b.exponents[ia][i] + b.exponents[ib][i];
      b.triples.push_back({static_cast<std::int16_t>(ia), static_cast<std::int16_t>(ib),
                           static_cast<std::int16_t>(b.index_of(e))});
    }
  }
  std::stable_sort(b.triples.begin(), b.triples.end(), [&](const Triple& x, const Triple& y) {
    return b.degree[x.c] < b.degree[y.c];
  });
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    b.triples_end[k] = static_cast<int>(
        std::count_if(b.triples.begin(), b.triples.end(), [&](const Triple& t) { return b.degree[t.c] <= k; }));
  }
  return b;
}

const Basis& basis(int dim) {
  static const std::array<Basis, kMaxJetDim + 1> all = [] {
    std::array<Basis, kMaxJetDim + 1> a;
    for (int d = 0; d <= kMaxJetDim; ++d) a[d] = build_basis(d);
    return a;
  }();
  return all[dim];
}

constexpr std::array<double, kMaxJetOrder + 1> kFactorial{1.0, 1.0, 2.0, 6.0, 24.0};

void check_shape(int dim, int order) {
  if (dim < 1 || dim > kMaxJetDim) {
    throw Error(ErrorCode::InvalidArgument, "jet dimension " + std::to_string(dim) + " outside [1, 5]");
  }
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "negative jet order");
  if (order > kMaxJetOrder) {
    throw Error(ErrorCode::OrderTooHigh, "jet order " + std::to_string(order) + " exceeds 4");
  }
}

}  // namespace

int jet_size(int dim, int order) {
  if (dim == 0) return 1;
  check_shape(dim, order);
  return basis(dim).size_upto[order];
}

Jet::Jet(int dim, int order) noexcept
    : dim_(static_cast<std::int8_t>(dim)),
      order_(static_cast<std::int8_t>(order)),
      size_(static_cast<std::int16_t>(basis(dim).size_upto[order])) {}

Jet::Jet(const Jet& other) noexcept : dim_(other.dim_), order_(other.order_), size_(other.size_) {
  std::copy_n(other.c_.begin(), size_, c_.begin());
}

Jet& Jet::operator=(const Jet& other) noexcept {
  dim_ = other.dim_;
  order_ = other.order_;
  size_ = other.size_;
  std::copy_n(other.c_.begin(), size_, c_.begin());
  return *this;
}

Jet Jet::constant(int dim, int order, double value) {
  check_shape(dim, order);
  Jet j(dim, order);
  std::fill_n(j.c_.begin(), j.size_, 0.0);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(int dim, int order, int axis, double value) {
  Jet j = constant(dim, order, value);
  if (axis < 0 || axis >= dim) throw Error(ErrorCode::InvalidArgument, "seed axis out of range");
  if (order >= 1) j.c_[1 + axis] = 1.0;
  return j;
}

double Jet::coefficient(std::span<const int> exponents) const {
  if (is_scalar()) {
    for (int e : exponents) {
      if (e != 0) return 0.0;
    }
    return c_[0];
  }
  if (static_cast<int>(exponents.size()) != dim_) {
    throw Error(ErrorCode::InvalidArgument, "exponent vector length differs from jet dimension");
  }
  std::array<int, kMaxJetDim> e{};
  int total = 0;
  for (int i = 0; i < dim_; ++i) {
    if (exponents[i] < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent");
    e[i] = exponents[i];
    total += e[i];
  }
  if (total > order_) throw Error(ErrorCode::OrderTooHigh, "requested coefficient beyond jet order");
  return c_[basis(dim_).index_of(e)];
}

double Jet::partial(std::span<const int> multi_index) const {
  if (is_scalar()) return multi_index.empty() ? c_[0] : 0.0;
  if (static_cast<int>(multi_index.size()) > order_) {
    throw Error(ErrorCode::OrderTooHigh, "partial of order " + std::to_string(multi_index.size()) +
                                             " from a jet of order " + std::to_string(order_));
  }
  std::array<int, kMaxJetDim> e{};
  for (int axis : multi_index) {
    if (axis < 0 || axis >= dim_) throw Error(ErrorCode::InvalidArgument, "coordinate index out of range");
    ++e[axis];
  }
  double scale = 1.0;
  for (int i = 0; i < dim_; ++i) scale *= kFactorial[e[i]];
  return scale * c_[basis(dim_).index_of(e)];
}

Jet Jet::derivative(int axis) const {
  if (is_scalar()) return Jet(0.0);
  if (axis < 0 || axis >= dim_) throw Error(ErrorCode::InvalidArgument, "coordinate index out of range");
  if (order_ == 0) throw Error(ErrorCode::OrderTooHigh, "cannot differentiate an order-0 jet");
  const Basis& b = basis(dim_);
  Jet d(dim_, order_ - 1);
  for (int idx = 0; idx < d.size_; ++idx) {
    const int up = b.raised[idx][axis];
    d.c_[idx] = static_cast<double>(b.exponents[idx][axis] + 1) * c_[up];
  }
  return d;
}

Jet Jet::truncated(int order) const {
  if (is_scalar() || order >= order_) return *this;
  check_shape(dim_, order);
  Jet t(dim_, order);
  std::copy_n(c_.begin(), t.size_, t.c_.begin());
  return t;
}

Jet Jet::shaped(int dim, int order) const {
  if (!is_scalar()) return truncated(order);
  return constant(dim, order, c_[0]);
}

Jet& Jet::operator+=(const Jet& rhs) {
  if (rhs.is_scalar()) {
    c_[0] += rhs.c_[0];
    return *this;
  }
  if (is_scalar()) {
    const double v = c_[0];
    *this = rhs;
    c_[0] += v;
    return *this;
  }
  if (dim_ != rhs.dim_) throw Error(ErrorCode::InvalidArgument, "jet dimension mismatch");
  if (rhs.order_ < order_) *this = truncated(rhs.order_);
  for (int i = 0; i < size_; ++i) c_[i] += rhs.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  if (rhs.is_scalar()) {
    c_[0] -= rhs.c_[0];
    return *this;
  }
  if (is_scalar()) {
    const double v = c_[0];
    *this = -rhs;
    c_[0] += v;
    return *this;
  }
  if (dim_ != rhs.dim_) throw Error(ErrorCode::InvalidArgument, "jet dimension mismatch");
  if (rhs.order_ < order_) *this = truncated(rhs.order_);
  for (int i = 0; i < size_; ++i) c_[i] -= rhs.c_[i];
  return *this;
}

Jet& Jet::operator*=(double rhs) noexcept {
  for (int i = 0; i < size_; ++i) c_[i] *= rhs;
  return *this;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  for (int i = 0; i < r.size_; ++i) r.c_[i] = -r.c_[i];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.is_scalar()) return b * a.c_[0];
  if (b.is_scalar()) return a * b.c_[0];
  if (a.dim_ != b.dim_) throw Error(ErrorCode::InvalidArgument, "jet dimension mismatch");
  const int order = std::min(a.order_, b.order_);
  const Basis& basis_ = basis(a.dim_);
  Jet r(a.dim_, order);
  std::fill_n(r.c_.begin(), r.size_, 0.0);
  const int end = basis_.triples_end[order];
  const Triple* t = basis_.triples.data();
  for (int k = 0; k < end; ++k) r.c_[t[k].c] += a.c_[t[k].a] * b.c_[t[k].b];
  return r;
}

Jet& Jet::operator*=(const Jet& rhs) {
  *this = *this * rhs;
  return *this;
}

Jet Jet::compose(std::span<const double> derivatives) const {
  if (is_scalar()) return Jet(derivatives[0]);
  Jet h = *this;
  h.c_[0] = 0.0;
  Jet r = constant(dim_, order_, derivatives[order_] / kFactorial[order_]);
  for (int k = order_ - 1; k >= 0; --k) {
    r = r * h;
    r.c_[0] += derivatives[k] / kFactorial[k];
  }
  return r;
}

namespace {

using Derivs = std::array<double, kMaxJetOrder + 1>;

Derivs power_derivatives(double x, double p) {
  Derivs d{};
  double coeff = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    d[k] = coeff * std::pow(x, p - k);
    coeff *= (p - k);
  }
  return d;
}

}  // namespace

Jet& Jet::operator/=(const Jet& rhs) {
  if (rhs.is_scalar()) return *this *= (1.0 / rhs.c_[0]);
  const Derivs inv = power_derivatives(rhs.value(), -1.0);
  *this = *this * rhs.compose(inv);
  return *this;
}

Jet operator/(double a, const Jet& b) {
  const Derivs inv = power_derivatives(b.value(), -1.0);
  return b.compose(inv) * a;
}

Jet sin(const Jet& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const Derivs d{s, c, -s, -c, s};
  return x.compose(d);
}

Jet cos(const Jet& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const Derivs d{c, -s, -c, s, c};
  return x.compose(d);
}

Jet tan(const Jet& x) {
  const double y = std::tan(x.value());
  const double d1 = 1.0 + y * y;
  const double d2 = 2.0 * y * d1;
  const double d3 = 2.0 * d1 * d1 + 2.0 * y * d2;
  const double d4 = 6.0 * d1 * d2 + 2.0 * y * d3;
  const Derivs d{y, d1, d2, d3, d4};
  return x.compose(d);
}

Jet exp(const Jet& x) {
  const double e = std::exp(x.value());
  const Derivs d{e, e, e, e, e};
  return x.compose(d);
}

Jet log(const Jet& x) {
  const double a = x.value();
  const Derivs d{std::log(a), 1.0 / a, -1.0 / (a * a), 2.0 / (a * a * a), -6.0 / (a * a * a * a)};
  return x.compose(d);
}

Jet sqrt(const Jet& x) {
  Derivs d = power_derivatives(x.value(), 0.5);
  d[0] = std::sqrt(x.value());
  return x.compose(d);
}

Jet pow(const Jet& x, double p) { return x.compose(power_derivatives(x.value(), p)); }

Jet atan(const Jet& x) {
  const double a = x.value();
  const double u = 1.0 / (1.0 + a * a);
  const Derivs d{std::atan(a), u, -2.0 * a * u * u, (6.0 * a * a - 2.0) * u * u * u,
                 24.0 * a * (1.0 - a * a) * u * u * u * u};
  return x.compose(d);
}

Jet sinh(const Jet& x) {
  const double s = std::sinh(x.value());
  const double c = std::cosh(x.value());
  const Derivs d{s, c, s, c, s};
  return x.compose(d);
}

Jet cosh(const Jet& x) {
  const double s = std::sinh(x.value());
  const double c = std::cosh(x.value());
  const Derivs d{c, s, c, s, c};
  return x.compose(d);
}

Jet tanh(const Jet& x) {
  const double y = std::tanh(x.value());
  const double d1 = 1.0 - y * y;
  const double d2 = -2.0 * y * d1;
  const double d3 = -2.0 * d1 * d1 - 2.0 * y * d2;
  const double d4 = -6.0 * d1 * d2 - 2.0 * y * d3;
  const Derivs d{y, d1, d2, d3, d4};
  return x.compose(d);
}

}  // namespace rys
