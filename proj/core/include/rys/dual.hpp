#pragma once

#include <cmath>

namespace rys {

/// Forward-mode dual number re + eps * e with e^2 = 0.
///
/// Nesting Dual<Dual<...>> k times and seeding one coordinate per level gives
/// a k-th mixed partial in the innermost eps-eps-...-eps slot.
template <class T>
struct Dual {
  T re{};
  T eps{};

  Dual() = default;
  Dual(double value) : re(value), eps(0.0) {}  // NOLINT
  Dual(T value, T derivative) : re(value), eps(derivative) {}

  Dual& operator+=(const Dual& o) { re += o.re; eps += o.eps; return *this; }
  Dual& operator-=(const Dual& o) { re -= o.re; eps -= o.eps; return *this; }
  Dual& operator*=(const Dual& o) {
    eps = eps * o.re + re * o.eps;
    re = re * o.re;
    return *this;
  }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }
  Dual& operator+=(double o) { re += o; return *this; }
  Dual& operator-=(double o) { re -= o; return *this; }
  Dual& operator*=(double o) { re *= o; eps *= o; return *this; }
  Dual& operator/=(double o) { re /= o; eps /= o; return *this; }

  friend Dual operator-(const Dual& a) { return {-a.re, -a.eps}; }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const T inv = 1.0 / b.re;
    return {a.re * inv, (a.eps * b.re - a.re * b.eps) * (inv * inv)};
  }
  friend Dual operator+(Dual a, double b) { return a += b; }
  friend Dual operator+(double a, Dual b) { return b += a; }
  friend Dual operator-(Dual a, double b) { return a -= b; }
  friend Dual operator-(double a, const Dual& b) { return {a - b.re, -b.eps}; }
  friend Dual operator*(Dual a, double b) { return a *= b; }
  friend Dual operator*(double a, Dual b) { return b *= a; }
  friend Dual operator/(Dual a, double b) { return a /= b; }
  friend Dual operator/(double a, const Dual& b) {
    const T inv = 1.0 / b.re;
    return {a * inv, -a * b.eps * (inv * inv)};
  }

  friend Dual sin(const Dual& x) {
    using std::cos;
    using std::sin;
    return {sin(x.re), cos(x.re) * x.eps};
  }
  friend Dual cos(const Dual& x) {
    using std::cos;
    using std::sin;
    return {cos(x.re), -sin(x.re) * x.eps};
  }
  friend Dual tan(const Dual& x) {
    using std::tan;
    const T t = tan(x.re);
    return {t, (1.0 + t * t) * x.eps};
  }
  friend Dual exp(const Dual& x) {
    using std::exp;
    const T e = exp(x.re);
    return {e, e * x.eps};
  }
  friend Dual log(const Dual& x) {
    using std::log;
    return {log(x.re), x.eps / x.re};
  }
  friend Dual sqrt(const Dual& x) {
    using std::sqrt;
    const T s = sqrt(x.re);
    return {s, x.eps / (2.0 * s)};
  }
  friend Dual pow(const Dual& x, double p) {
    using std::pow;
    return {pow(x.re, p), p * pow(x.re, p - 1.0) * x.eps};
  }
  friend Dual atan(const Dual& x) {
    using std::atan;
    return {atan(x.re), x.eps / (1.0 + x.re * x.re)};
  }
  friend Dual sinh(const Dual& x) {
    using std::cosh;
    using std::sinh;
    return {sinh(x.re), cosh(x.re) * x.eps};
  }
  friend Dual cosh(const Dual& x) {
    using std::cosh;
    using std::sinh;
    return {cosh(x.re), sinh(x.re) * x.eps};
  }
  friend Dual tanh(const Dual& x) {
    using std::tanh;
    const T t = tanh(x.re);
    return {t, (1.0 - t * t) * x.eps};
  }
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual1>;
using Dual3 = Dual<Dual2>;
using Dual4 = Dual<Dual3>;

}  // namespace rys
