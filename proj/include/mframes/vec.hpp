#pragma once

#include <array>
#include <cmath>

#include "dual.hpp"

namespace mframes {

template <class T>
using Vec3T = std::array<T, 3>;
template <class T>
using Vec2T = std::array<T, 2>;
using Vec3 = Vec3T<double>;
using Vec2 = Vec2T<double>;

template <class T, std::size_t N>
std::array<T, N> operator+(const std::array<T, N>& a, const std::array<T, N>& b) {
  std::array<T, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
  return r;
}
template <class T, std::size_t N>
std::array<T, N> operator-(const std::array<T, N>& a, const std::array<T, N>& b) {
  std::array<T, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
  return r;
}
template <class T, std::size_t N>
std::array<T, N> operator-(const std::array<T, N>& a) {
  std::array<T, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = -a[i];
  return r;
}
template <class T, class S, std::size_t N>
std::array<T, N> operator*(const S& s, const std::array<T, N>& a) {
  std::array<T, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = s * a[i];
  return r;
}
template <class T, class S, std::size_t N>
std::array<T, N> operator/(const std::array<T, N>& a, const S& s) {
  std::array<T, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] / s;
  return r;
}

template <class T, std::size_t N>
T dot(const std::array<T, N>& a, const std::array<T, N>& b) {
  T s = a[0] * b[0];
  for (std::size_t i = 1; i < N; ++i) s = s + a[i] * b[i];
  return s;
}

template <class T>
Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class T, std::size_t N>
T norm(const std::array<T, N>& a) {
  using std::sqrt;
  return sqrt(dot(a, a));
}

template <std::size_t N>
double max_abs_diff(const std::array<double, N>& a, const std::array<double, N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
  return m;
}

template <class T, std::size_t N>
std::array<double, N> values_of(const std::array<T, N>& a) {
  std::array<double, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = value_of(a[i]);
  return r;
}

}  // namespace mframes
