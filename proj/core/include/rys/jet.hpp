#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace rys {

inline constexpr int kMaxJetDim = 5;
inline constexpr int kMaxJetOrder = 4;
/// Number of monomials of total degree <= 4 in 5 variables.
inline constexpr int kMaxJetTerms = 126;

/// Truncated multivariate Taylor polynomial about a point.
///
/// A Jet of dimension n and order K stores the Taylor coefficients
/// c_a = (d^a f)(p) / a! for every multi-exponent a with |a| <= K, in graded
/// order (constant term first). Arithmetic is exact up to rounding in the
/// quotient ring that drops monomials of degree > K, so evaluating a smooth
/// closed-form function on seeded jets yields every mixed partial up to order
/// K in one pass.
///
/// A Jet with dim() == 0 is a bare constant. It mixes with jets of any
/// dimension and order, which lets generic field code write T(1.0).
class Jet {
 public:
  Jet() noexcept : dim_(0), order_(kMaxJetOrder), size_(1) { c_[0] = 0.0; }
  Jet(double value) noexcept : dim_(0), order_(kMaxJetOrder), size_(1) { c_[0] = value; }  // NOLINT

  Jet(const Jet& other) noexcept;
  Jet& operator=(const Jet& other) noexcept;

  static Jet constant(int dim, int order, double value);
  static Jet variable(int dim, int order, int axis, double value);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  int size() const noexcept { return size_; }
  bool is_scalar() const noexcept { return dim_ == 0; }

  double value() const noexcept { return c_[0]; }
  std::span<const double> coefficients() const noexcept { return {c_.data(), static_cast<std::size_t>(size_)}; }

  /// Taylor coefficient for an exponent vector (length dim()).
  double coefficient(std::span<const int> exponents) const;

  /// Mixed partial derivative for a list of coordinate indices, e.g. {0, 1, 1}
  /// is d^3/dx0 dx1^2. Throws OrderTooHigh past order().
  double partial(std::span<const int> multi_index) const;

  /// d/dx_axis as a jet of order order() - 1.
  Jet derivative(int axis) const;

  Jet truncated(int order) const;

  /// Promotes a bare constant to the given shape; a no-op for shaped jets.
  Jet shaped(int dim, int order) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(double rhs) noexcept { c_[0] += rhs; return *this; }
  Jet& operator-=(double rhs) noexcept { c_[0] -= rhs; return *this; }
  Jet& operator*=(double rhs) noexcept;
  Jet& operator/=(double rhs) noexcept { return *this *= (1.0 / rhs); }

  friend Jet operator-(const Jet& a);
  friend Jet operator*(const Jet& a, const Jet& b);

  /// f(x) for a univariate f given its derivatives f(x0), f'(x0), ... at the
  /// constant term x0. `derivatives` must hold at least order()+1 entries.
  Jet compose(std::span<const double> derivatives) const;

 private:
  Jet(int dim, int order) noexcept;

  std::int8_t dim_;
  std::int8_t order_;
  std::int16_t size_;
  std::array<double, kMaxJetTerms> c_;
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator/(Jet a, const Jet& b) { return a /= b; }
inline Jet operator+(Jet a, double b) { return a += b; }
inline Jet operator+(double a, Jet b) { return b += a; }
inline Jet operator-(Jet a, double b) { return a -= b; }
inline Jet operator-(double a, const Jet& b) { return -b + a; }
inline Jet operator*(Jet a, double b) { return a *= b; }
inline Jet operator*(double a, Jet b) { return b *= a; }
inline Jet operator/(Jet a, double b) { return a /= b; }
Jet operator/(double a, const Jet& b);

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet tan(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double p);
Jet atan(const Jet& x);
Jet sinh(const Jet& x);
Jet cosh(const Jet& x);
Jet tanh(const Jet& x);

/// Number of monomials of degree <= order in dim variables.
int jet_size(int dim, int order);

}  // namespace rys
