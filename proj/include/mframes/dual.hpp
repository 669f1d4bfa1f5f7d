#pragma once

// Forward-mode automatic differentiation with nestable dual numbers.
//
// Dual<T> carries a value and one directional derivative. Nesting
// (Dual<Dual<double>>, ...) gives higher-order directional derivatives: with
// seeds in directions d1 (outer) and d2 (inner), the innermost derivative
// part of the result is the mixed second derivative along d1 and d2.

#include <cmath>
#include <type_traits>

namespace mframes {

template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double x) : v(x), d(0.0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator+(const Dual& a) { return a; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
  }

  friend Dual operator+(const Dual& a, double s) { return {a.v + s, a.d}; }
  friend Dual operator+(double s, const Dual& a) { return {s + a.v, a.d}; }
  friend Dual operator-(const Dual& a, double s) { return {a.v - s, a.d}; }
  friend Dual operator-(double s, const Dual& a) { return {s - a.v, -a.d}; }
  friend Dual operator*(const Dual& a, double s) { return {a.v * s, a.d * s}; }
  friend Dual operator*(double s, const Dual& a) { return {s * a.v, s * a.d}; }
  friend Dual operator/(const Dual& a, double s) { return {a.v / s, a.d / s}; }
  friend Dual operator/(double s, const Dual& a) {
    const T q = s / a.v;
    return {q, -q * a.d / a.v};
  }
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual1>;
using Dual3 = Dual<Dual2>;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

/// Innermost real value of a (possibly nested) dual number.
inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

// Comparisons act on the real value; they only steer branch selection.
template <class T>
bool operator<(const Dual<T>& a, const Dual<T>& b) { return value_of(a) < value_of(b); }
template <class T>
bool operator>(const Dual<T>& a, const Dual<T>& b) { return value_of(a) > value_of(b); }
template <class T>
bool operator<(const Dual<T>& a, double b) { return value_of(a) < b; }
template <class T>
bool operator>(const Dual<T>& a, double b) { return value_of(a) > b; }

inline double sech(double x) { return 1.0 / std::cosh(x); }

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos, std::sin;
  return {sin(x.v), cos(x.v) * x.d};
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos, std::sin;
  return {cos(x.v), -sin(x.v) * x.d};
}
template <class T>
Dual<T> tan(const Dual<T>& x) {
  using std::tan;
  const T t = tan(x.v);
  return {t, (1.0 + t * t) * x.d};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  const T e = exp(x.v);
  return {e, e * x.d};
}
template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return {log(x.v), x.d / x.v};
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  const T r = sqrt(x.v);
  return {r, x.d / (2.0 * r)};
}
template <class T>
Dual<T> sinh(const Dual<T>& x) {
  using std::cosh, std::sinh;
  return {sinh(x.v), cosh(x.v) * x.d};
}
template <class T>
Dual<T> cosh(const Dual<T>& x) {
  using std::cosh, std::sinh;
  return {cosh(x.v), sinh(x.v) * x.d};
}
template <class T>
Dual<T> tanh(const Dual<T>& x) {
  using std::tanh;
  const T t = tanh(x.v);
  return {t, (1.0 - t * t) * x.d};
}
template <class T>
Dual<T> sech(const Dual<T>& x) {
  using std::tanh;
  using mframes::sech;
  const T s = sech(x.v);
  return {s, -s * tanh(x.v) * x.d};
}
template <class T>
Dual<T> atan(const Dual<T>& x) {
  using std::atan;
  return {atan(x.v), x.d / (1.0 + x.v * x.v)};
}
template <class T>
Dual<T> asin(const Dual<T>& x) {
  using std::asin, std::sqrt;
  return {asin(x.v), x.d / sqrt(1.0 - x.v * x.v)};
}
template <class T>
Dual<T> acos(const Dual<T>& x) {
  using std::acos, std::sqrt;
  return {acos(x.v), -x.d / sqrt(1.0 - x.v * x.v)};
}
template <class T>
Dual<T> abs(const Dual<T>& x) {
  return value_of(x) < 0.0 ? -x : x;
}

/// x^n for integer n by repeated multiplication (valid for negative bases).
template <class T>
T ipow(const T& x, int n) {
  if (n < 0) return T(1.0) / ipow(x, -n);
  T result(1.0);
  T base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

}  // namespace mframes
