#pragma once

// Built-in surfaces: pseudosphere (tractroid), Dini's surface, round sphere,
// plane, and user-supplied analytic patches.

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "errors.hpp"
#include "expr.hpp"
#include "surface.hpp"

namespace mframes {

struct PseudosphereParams {
  double u_cut = 0.2;
  /// Rotation β of the parameter chart: the profile coordinate is
  /// s = u cos β − v sin β and the angle around the axis t = u sin β + v cos β.
  double chart_angle = 0.0;
  /// Nonlinear term added to the angle: t = u sin β + v cos β + w·v·sin u.
  /// With w ≠ 0 derivatives come from automatic differentiation.
  double chart_warp = 0.0;
  std::optional<ParamRect> domain;
};

/// Default pseudosphere domain: 3.5 × 8 rectangle whose nearest corner sits
/// on the edge of the excluded band |s| < u_cut.
inline ParamRect default_pseudosphere_domain(const PseudosphereParams& p) {
  const double c = std::cos(p.chart_angle), sn = std::sin(p.chart_angle);
  const double half_v = 4.0;
  const double u_lo = (p.u_cut + half_v * std::fabs(sn)) / c + 1e-9;
  return {u_lo, u_lo + 3.5, -half_v, half_v};
}

inline SurfaceImmersion pseudosphere(const PseudosphereParams& params = {}) {
  if (!(params.u_cut > 0.0)) throw DomainError("pseudosphere u_cut must be positive");
  if (!(std::fabs(params.chart_angle) < std::numbers::pi / 2))
    throw DomainError("pseudosphere chart_angle must lie in (-pi/2, pi/2)");
  const double c = std::cos(params.chart_angle), sn = std::sin(params.chart_angle);
  const ParamRect dom = params.domain.value_or(default_pseudosphere_domain(params));
  if (!dom.valid()) throw DomainError("pseudosphere domain is empty");

  // s is linear in (u, v), so the band test on the corners covers the rectangle.
  int above = 0, below = 0;
  for (double u : {dom.u_min, dom.u_max})
    for (double v : {dom.v_min, dom.v_max}) {
      const double s = c * u - sn * v;
      if (s >= params.u_cut) ++above;
      else if (s <= -params.u_cut) ++below;
    }
  if (above != 4 && below != 4)
    throw DomainError("pseudosphere domain meets the singular band |s| < " + std::to_string(params.u_cut));
  // Jacobian of (u, v) ↦ (s, t) is 1 + w(cos β sin u + sin β v cos u); sampled.
  const double w = params.chart_warp;
  if (w != 0.0) {
    constexpr int kSamples = 64;
    for (int a = 0; a <= kSamples; ++a)
      for (int b = 0; b <= kSamples; ++b) {
        const double u = dom.u_min + (dom.u_max - dom.u_min) * a / kSamples;
        const double v = dom.v_min + (dom.v_max - dom.v_min) * b / kSamples;
        if (!(1.0 + w * (c * std::sin(u) + sn * v * std::cos(u)) > 0.1))
          throw DomainError("pseudosphere chart_warp folds the chart on the domain");
      }
  }

  auto shape = [c, sn, w](auto u, auto v) {
    using std::cos, std::sin, std::tanh;
    const auto s = c * u - sn * v;
    const auto t = sn * u + c * v + w * (v * sin(u));
    const auto r = sech(s);
    return Vec3T<decltype(s)>{r * cos(t), r * sin(t), s - tanh(s)};
  };
  auto analytic = [c, sn](double u, double v) {
    const double s = c * u - sn * v;
    const double t = sn * u + c * v;
    const double r0 = 1.0 / std::cosh(s), th = std::tanh(s);
    const double r1 = -r0 * th;
    const double r2 = r0 * (1.0 - 2.0 * r0 * r0);
    const double r3 = -(6.0 * th * th - 5.0) * th * r0;
    const double z1 = th * th;
    const double z2 = 2.0 * th * r0 * r0;
    const double z3 = 6.0 * th * th * th * th - 8.0 * th * th + 2.0;
    const double ct = std::cos(t), st = std::sin(t);
    Jet3 j;
    j.p = {r0 * ct, r0 * st, s - th};
    j.u = {r1 * ct, r1 * st, z1};
    j.v = {-r0 * st, r0 * ct, 0.0};
    j.uu = {r2 * ct, r2 * st, z2};
    j.uv = {-r1 * st, r1 * ct, 0.0};
    j.vv = {-r0 * ct, -r0 * st, 0.0};
    j.uuu = {r3 * ct, r3 * st, z3};
    j.uuv = {-r2 * st, r2 * ct, 0.0};
    j.uvv = {-r1 * ct, -r1 * st, 0.0};
    j.vvv = {r0 * st, -r0 * ct, 0.0};
    // The jet above is in (s, t); ∂u = c ∂s + sn ∂t, ∂v = −sn ∂s + c ∂t.
    return detail::linear_chart(j, c, sn, -sn, c);
  };
  auto surface = SurfaceImmersion::from_generic("pseudosphere", dom, shape);
  return w == 0.0 ? surface.with_analytic(analytic) : surface;
}

/// Round sphere of radius R, φ = R(sin u cos v, sin u sin v, cos u); with this
/// ordering φ_u × φ_v is the outward normal.
inline SurfaceImmersion sphere(double radius = 1.0, std::optional<ParamRect> domain = std::nullopt) {
  if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
  const ParamRect dom = domain.value_or(ParamRect{0.1, std::numbers::pi - 0.1, -std::numbers::pi, std::numbers::pi});
  if (!dom.valid() || dom.u_min <= 0.0 || dom.u_max >= std::numbers::pi)
    throw DomainError("sphere domain must satisfy 0 < u < pi");
  auto shape = [radius](auto u, auto v) {
    using std::cos, std::sin;
    return Vec3T<decltype(u)>{radius * (sin(u) * cos(v)), radius * (sin(u) * sin(v)), radius * cos(u)};
  };
  auto analytic = [radius](double u, double v) {
    // k-th derivatives of sin and cos.
    auto dsin = [](double x, int k) {
      const double s = std::sin(x), c = std::cos(x);
      const double t[4] = {s, c, -s, -c};
      return t[k % 4];
    };
    auto dcos = [](double x, int k) {
      const double s = std::sin(x), c = std::cos(x);
      const double t[4] = {c, -s, -c, s};
      return t[k % 4];
    };
    auto term = [&](int a, int b) {
      return Vec3{radius * dsin(u, a) * dcos(v, b), radius * dsin(u, a) * dsin(v, b), b == 0 ? radius * dcos(u, a) : 0.0};
    };
    Jet3 j;
    j.p = term(0, 0);
    j.u = term(1, 0);
    j.v = term(0, 1);
    j.uu = term(2, 0);
    j.uv = term(1, 1);
    j.vv = term(0, 2);
    j.uuu = term(3, 0);
    j.uuv = term(2, 1);
    j.uvv = term(1, 2);
    j.vvv = term(0, 3);
    return j;
  };
  return SurfaceImmersion::from_generic("sphere", dom, shape).with_analytic(analytic);
}

inline SurfaceImmersion plane(std::optional<ParamRect> domain = std::nullopt) {
  const ParamRect dom = domain.value_or(ParamRect{-1.0, 1.0, -1.0, 1.0});
  if (!dom.valid()) throw DomainError("plane domain is empty");
  auto shape = [](auto u, auto v) { return Vec3T<decltype(u)>{u, v, decltype(u)(0.0)}; };
  auto analytic = [](double u, double v) {
    Jet3 j;
    j.p = {u, v, 0.0};
    j.u = {1.0, 0.0, 0.0};
    j.v = {0.0, 1.0, 0.0};
    return j;
  };
  return SurfaceImmersion::from_generic("plane", dom, shape).with_analytic(analytic);
}

/// Dini's surface (a cos u sin v, a sin u sin v, a(cos v + ln tan(v/2)) + b u),
/// Gaussian curvature −1/(a² + b²). The defaults satisfy a² + b² = 1.
inline SurfaceImmersion dini_surface(double a = 0.96, double b = 0.28, std::optional<ParamRect> domain = std::nullopt) {
  if (!(a > 0.0)) throw DomainError("Dini constant a must be positive");
  const ParamRect dom = domain.value_or(ParamRect{-std::numbers::pi, std::numbers::pi, 0.3, 1.3});
  const double edge = std::numbers::pi / 2;
  if (!dom.valid() || dom.v_min <= 0.0 || dom.v_max >= std::numbers::pi || (dom.v_min <= edge && dom.v_max >= edge))
    throw DomainError("Dini domain must lie inside 0 < v < pi/2 or pi/2 < v < pi");
  auto shape = [a, b](auto u, auto v) {
    using std::cos, std::sin, std::log, std::tan;
    return Vec3T<decltype(u)>{a * (cos(u) * sin(v)), a * (sin(u) * sin(v)), a * (cos(v) + log(tan(0.5 * v))) + b * u};
  };
  return SurfaceImmersion::from_generic("dini", dom, shape);
}

/// Patch given by three expressions in u and v (see expr.hpp).
inline SurfaceImmersion custom_surface(const std::string& x, const std::string& y, const std::string& z,
                                       const ParamRect& domain, const std::map<std::string, double>& constants = {}) {
  if (!domain.valid()) throw DomainError("custom surface domain is empty");
  const std::array<Expression, 3> e{Expression::parse(x, constants), Expression::parse(y, constants),
                                    Expression::parse(z, constants)};
  auto shape = [e](auto u, auto v) { return Vec3T<decltype(u)>{e[0](u, v), e[1](u, v), e[2](u, v)}; };
  return SurfaceImmersion::from_generic("custom", domain, shape);
}

}  // namespace mframes
