#pragma once

// Differential forms on a frame field, stored in frame components:
// a one-form is a·θ¹ + b·θ², a two-form is c·θ¹∧θ² (θ¹∧θ² = area form).

#include <cmath>
#include <vector>

#include "frame_field.hpp"

namespace mframes {

struct OneFormField {
  ScalarField a, b;

  /// Value on the tangent vector x e₁ + y e₂ at node (i, j).
  double eval(int i, int j, const Vec2& frame_vec) const { return a(i, j) * frame_vec[0] + b(i, j) * frame_vec[1]; }
};

struct TwoFormField {
  ScalarField c;
};

/// Coefficients of a one-form against du, dv.
struct CoordinateForm {
  ScalarField du, dv;
};

namespace detail {

template <class F>
ScalarField combine(const ScalarField& x, const ScalarField& y, F op) {
  ScalarField r(x.grid);
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    r.values[k] = op(x.values[k], y.values[k]);
    r.accurate[k] = x.accurate[k] && y.accurate[k];
  }
  return r;
}

}  // namespace detail

inline ScalarField operator+(const ScalarField& x, const ScalarField& y) {
  return detail::combine(x, y, [](double p, double q) { return p + q; });
}
inline ScalarField operator-(const ScalarField& x, const ScalarField& y) {
  return detail::combine(x, y, [](double p, double q) { return p - q; });
}
inline ScalarField operator*(const ScalarField& x, const ScalarField& y) {
  return detail::combine(x, y, [](double p, double q) { return p * q; });
}

inline OneFormField operator+(const OneFormField& f, const OneFormField& g) { return {f.a + g.a, f.b + g.b}; }
inline OneFormField operator-(const OneFormField& f, const OneFormField& g) { return {f.a - g.a, f.b - g.b}; }
inline OneFormField operator*(const ScalarField& s, const OneFormField& f) { return {s * f.a, s * f.b}; }
inline TwoFormField operator+(const TwoFormField& f, const TwoFormField& g) { return {f.c + g.c}; }
inline TwoFormField operator-(const TwoFormField& f, const TwoFormField& g) { return {f.c - g.c}; }

inline OneFormField constant_form(const Grid& g, double a, double b) { return {ScalarField(g, a), ScalarField(g, b)}; }

/// θ¹ = (1, 0), θ² = (0, 1) in frame components.
inline std::pair<OneFormField, OneFormField> coframe(const FrameField& ff) {
  return {constant_form(ff.grid, 1.0, 0.0), constant_form(ff.grid, 0.0, 1.0)};
}

/// (f∧g)(e₁, e₂) = f(e₁)g(e₂) − f(e₂)g(e₁).
inline TwoFormField wedge(const OneFormField& f, const OneFormField& g) {
  return {f.a * g.b - f.b * g.a};
}

/// du/dv components: f(∂u) = a θ¹(∂u) + b θ²(∂u), with θⁱ(x) = I(eᵢ, x).
inline CoordinateForm to_coordinates(const OneFormField& f, const FrameField& ff) {
  CoordinateForm c{ScalarField(ff.grid), ScalarField(ff.grid)};
  ff.grid.for_each([&](int i, int j) {
    const auto& fr = ff.at(i, j);
    const auto& m = fr.forms;
    const Vec2 t1{m.E * fr.e1[0] + m.F * fr.e1[1], m.F * fr.e1[0] + m.G * fr.e1[1]};
    const Vec2 t2{m.E * fr.e2[0] + m.F * fr.e2[1], m.F * fr.e2[0] + m.G * fr.e2[1]};
    c.du(i, j) = f.a(i, j) * t1[0] + f.b(i, j) * t2[0];
    c.dv(i, j) = f.a(i, j) * t1[1] + f.b(i, j) * t2[1];
  });
  c.du.accurate = detail::mask_and(f.a.accurate, f.b.accurate);
  c.dv.accurate = c.du.accurate;
  return c;
}

inline OneFormField from_coordinates(const CoordinateForm& c, const FrameField& ff) {
  OneFormField f{ScalarField(ff.grid), ScalarField(ff.grid)};
  ff.grid.for_each([&](int i, int j) {
    const auto& fr = ff.at(i, j);
    f.a(i, j) = c.du(i, j) * fr.e1[0] + c.dv(i, j) * fr.e1[1];
    f.b(i, j) = c.du(i, j) * fr.e2[0] + c.dv(i, j) * fr.e2[1];
  });
  f.a.accurate = detail::mask_and(c.du.accurate, c.dv.accurate);
  f.b.accurate = f.a.accurate;
  return f;
}

/// Differential of a scalar field: centered differences, then frame components.
inline OneFormField exterior_d(const ScalarField& s, const FrameField& ff) {
  return from_coordinates({partial(s, 0), partial(s, 1)}, ff);
}

/// d(c_u du + c_v dv) = (∂_u c_v − ∂_v c_u) du∧dv, and du∧dv = θ¹∧θ²/√g.
inline TwoFormField exterior_d(const OneFormField& f, const FrameField& ff) {
  const CoordinateForm c = to_coordinates(f, ff);
  const ScalarField curl = partial(c.dv, 0) - partial(c.du, 1);
  ScalarField out = curl;
  ff.grid.for_each([&](int i, int j) { out(i, j) = curl(i, j) / ff.sqrt_g(i, j); });
  return {out};
}

/// ⟨∂ē_from, ē_to⟩ by centered differences of the sampled ambient frame.
inline OneFormField ambient_connection(const FrameField& ff, Vec3 PrincipalFrame<double>::*from,
                                       Vec3 PrincipalFrame<double>::*to) {
  const Grid& g = ff.grid;
  const std::vector<char> all(g.size(), 1);
  auto get = [&](int i, int j) { return ff.at(i, j).*from; };
  const auto [du, oku] = detail::grid_partial<Vec3>(g, get, all, 0);
  const auto [dv, okv] = detail::grid_partial<Vec3>(g, get, all, 1);
  CoordinateForm c{ScalarField(g), ScalarField(g)};
  g.for_each([&](int i, int j) {
    const std::size_t k = g.index(i, j);
    c.du(i, j) = dot(du[k], ff.at(i, j).*to);
    c.dv(i, j) = dot(dv[k], ff.at(i, j).*to);
  });
  c.du.accurate = detail::mask_and(oku, okv);
  c.dv.accurate = c.du.accurate;
  return from_coordinates(c, ff);
}

inline OneFormField omega12_ambient(const FrameField& ff) {
  return ambient_connection(ff, &PrincipalFrame<double>::amb1, &PrincipalFrame<double>::amb2);
}
inline OneFormField omega13_ambient(const FrameField& ff) {
  return ambient_connection(ff, &PrincipalFrame<double>::amb1, &PrincipalFrame<double>::normal);
}
inline OneFormField omega23_ambient(const FrameField& ff) {
  return ambient_connection(ff, &PrincipalFrame<double>::amb2, &PrincipalFrame<double>::normal);
}

inline constexpr double kCurvatureGapGuard = 1e-8;

/// ω₁² from principal-curvature derivatives:
/// (κ₁ − κ₂) ω₁² = dκ₁(e₂) θ¹ + dκ₂(e₁) θ².
inline OneFormField omega12_from_curvatures(const FrameField& ff) {
  const OneFormField dk1 = exterior_d(ff.kappa1(), ff);
  const OneFormField dk2 = exterior_d(ff.kappa2(), ff);
  OneFormField w{dk1.b, dk2.a};
  w.a.accurate = w.b.accurate = detail::mask_and(dk1.b.accurate, dk2.a.accurate);
  ff.grid.for_each([&](int i, int j) {
    const double gap = ff.at(i, j).kappa1 - ff.at(i, j).kappa2;
    if (!(gap > kCurvatureGapGuard))
      throw PreconditionError("kappa1 - kappa2 = " + std::to_string(gap) + " below guard at grid node (" +
                              std::to_string(i) + ", " + std::to_string(j) + ")");
    w.a(i, j) /= gap;
    w.b(i, j) /= gap;
  });
  return w;
}

/// ω₁³ = κ₁θ¹ and ω₂³ = κ₂θ².
inline std::pair<OneFormField, OneFormField> normal_connection_forms(const FrameField& ff) {
  const ScalarField zero(ff.grid, 0.0);
  return {OneFormField{ff.kappa1(), zero}, OneFormField{zero, ff.kappa2()}};
}

/// Largest |value| over nodes flagged accurate.
inline double max_norm(const ScalarField& s) {
  double m = 0.0;
  for (std::size_t k = 0; k < s.values.size(); ++k)
    if (s.accurate[k]) m = std::fmax(m, std::fabs(s.values[k]));
  return m;
}
inline double max_norm(const TwoFormField& f) { return max_norm(f.c); }
inline double max_norm(const OneFormField& f) { return std::fmax(max_norm(f.a), max_norm(f.b)); }

}  // namespace mframes
