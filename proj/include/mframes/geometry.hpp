#pragma once

// Pointwise extrinsic geometry of an immersed surface: fundamental forms,
// shape operator I⁻¹·II, principal curvatures and frame, asymptotic frame.
//
// Everything here is templated on the scalar so that a Jet2<Dual1> (see
// directional_lift) yields exact first derivatives of κ₁, κ₂, α and of the
// ambient frame; the connection forms are read off those derivatives.

#include <cmath>
#include <optional>

#include "errors.hpp"
#include "surface.hpp"
#include "vec.hpp"

namespace mframes {

inline constexpr double kImmersionTolerance = 1e-12;

template <class T>
struct FundamentalForms {
  T E, F, G;  // first fundamental form
  T L, M, N;  // second fundamental form w.r.t. `normal`
  Vec3T<T> normal;

  T metric_det() const { return E * G - F * F; }
};

template <class T>
FundamentalForms<T> fundamental_forms(const Jet2<T>& j) {
  const Vec3T<T> c = cross(j.u, j.v);
  const T len = norm(c);
  if (!(value_of(len) >= kImmersionTolerance)) throw ImmersionError("|phi_u x phi_v| below immersion tolerance");
  FundamentalForms<T> f;
  f.normal = c / len;
  f.E = dot(j.u, j.u);
  f.F = dot(j.u, j.v);
  f.G = dot(j.v, j.v);
  f.L = dot(j.uu, f.normal);
  f.M = dot(j.uv, f.normal);
  f.N = dot(j.vv, f.normal);
  return f;
}

/// Shape operator I⁻¹·II acting on parameter-coordinate components.
template <class T>
struct ShapeOperator {
  T a11, a12, a21, a22;

  T trace() const { return a11 + a22; }
  T det() const { return a11 * a22 - a12 * a21; }
  Vec2T<T> apply(const Vec2T<T>& x) const { return {a11 * x[0] + a12 * x[1], a21 * x[0] + a22 * x[1]}; }
};

template <class T>
ShapeOperator<T> shape_operator(const FundamentalForms<T>& f) {
  const T g = f.metric_det();
  return {(f.G * f.L - f.F * f.M) / g, (f.G * f.M - f.F * f.N) / g, (f.E * f.M - f.F * f.L) / g,
          (f.E * f.N - f.F * f.M) / g};
}

template <class T>
T first_form(const FundamentalForms<T>& f, const Vec2T<T>& x, const Vec2T<T>& y) {
  return f.E * x[0] * y[0] + f.F * (x[0] * y[1] + x[1] * y[0]) + f.G * x[1] * y[1];
}

/// Second fundamental form evaluated on a tangent vector (normal curvature
/// when x has unit length in the induced metric).
template <class T>
T sff(const FundamentalForms<T>& f, const Vec2T<T>& x) {
  return f.L * x[0] * x[0] + 2.0 * f.M * x[0] * x[1] + f.N * x[1] * x[1];
}

/// Quarter turn counter-clockwise in the induced metric: {x, J x} is positively
/// oriented, i.e. φ_*(x) × φ_*(Jx) points along the normal.
template <class T>
Vec2T<T> quarter_turn(const FundamentalForms<T>& f, const Vec2T<T>& x) {
  using std::sqrt;
  const T s = sqrt(f.metric_det());
  return {(-f.F * x[0] - f.G * x[1]) / s, (f.E * x[0] + f.F * x[1]) / s};
}

template <class T>
Vec3T<T> push_forward(const Jet2<T>& j, const Vec2T<T>& x) {
  return x[0] * j.u + x[1] * j.v;
}

/// Sign convention for a principal direction with no continuity hint:
/// positive first parameter component, ties broken by positive second.
inline bool basepoint_orientation_ok(const Vec2& x) {
  const double scale = std::hypot(x[0], x[1]);
  const double tie = 1e-12 * scale;
  if (x[0] > tie) return true;
  if (x[0] < -tie) return false;
  return x[1] > 0.0;
}

template <class T>
struct PrincipalFrame {
  FundamentalForms<T> forms;
  T kappa1, kappa2;  // κ₁ > 0 > κ₂
  T alpha;           // arctan κ₁ ∈ (0, π/2)
  Vec2T<T> e1, e2;   // parameter-coordinate components
  Vec3T<T> amb1, amb2, normal;
};

/// Principal frame at a point with K < 0. `hint` (parameter components) fixes
/// the sign of e₁ by continuity; without it the basepoint rule applies.
template <class T>
PrincipalFrame<T> principal_frame(const Jet2<T>& j, const std::optional<Vec2>& hint = std::nullopt) {
  using std::atan, std::sqrt;
  PrincipalFrame<T> pf;
  pf.forms = fundamental_forms(j);
  const ShapeOperator<T> s = shape_operator(pf.forms);
  const T half_tr = 0.5 * s.trace();
  const T det = s.det();
  if (!(value_of(det) < 0.0))
    throw NotHyperbolicError("Gaussian curvature " + std::to_string(value_of(det)) + " is not negative");
  const T root = sqrt(half_tr * half_tr - det);
  pf.kappa1 = half_tr + root;
  pf.kappa2 = half_tr - root;

  // Kernel of S − κ₁: either row gives an eigenvector; keep the better scaled one.
  const Vec2T<T> c1{s.a12, pf.kappa1 - s.a11};
  const Vec2T<T> c2{pf.kappa1 - s.a22, s.a21};
  const Vec2 v1 = values_of(c1), v2 = values_of(c2);
  Vec2T<T> x = (v1[0] * v1[0] + v1[1] * v1[1] >= v2[0] * v2[0] + v2[1] * v2[1]) ? c1 : c2;
  const Vec2 xv = values_of(x);
  const bool keep = hint ? (xv[0] * (*hint)[0] + xv[1] * (*hint)[1] >= 0.0) : basepoint_orientation_ok(xv);
  if (!keep) x = -x;
  x = x / sqrt(first_form(pf.forms, x, x));

  pf.e1 = x;
  pf.e2 = quarter_turn(pf.forms, x);
  pf.amb1 = push_forward(j, pf.e1);
  pf.amb2 = push_forward(j, pf.e2);
  pf.normal = pf.forms.normal;
  pf.alpha = atan(pf.kappa1);
  return pf;
}

/// Value and exact first derivatives (along ∂u and ∂v) of the principal frame.
struct FrameJet {
  PrincipalFrame<double> at;
  PrincipalFrame<Dual1> along_u, along_v;

  Vec2 grad_kappa1() const { return {along_u.kappa1.d, along_v.kappa1.d}; }
  Vec2 grad_kappa2() const { return {along_u.kappa2.d, along_v.kappa2.d}; }
  Vec2 grad_alpha() const { return {along_u.alpha.d, along_v.alpha.d}; }

  /// ⟨dē_a(∂x), ē_b⟩ for x ∈ {u, v}: coordinate components of a connection form.
  static Vec2 connection(const PrincipalFrame<Dual1>& fu, const PrincipalFrame<Dual1>& fv,
                         Vec3T<Dual1> PrincipalFrame<Dual1>::*from, Vec3T<Dual1> PrincipalFrame<Dual1>::*to) {
    auto d = [](const Vec3T<Dual1>& w) { return Vec3{w[0].d, w[1].d, w[2].d}; };
    return {dot(d(fu.*from), values_of(fu.*to)), dot(d(fv.*from), values_of(fv.*to))};
  }
  Vec2 omega12() const { return connection(along_u, along_v, &PrincipalFrame<Dual1>::amb1, &PrincipalFrame<Dual1>::amb2); }
  Vec2 omega13() const {
    return connection(along_u, along_v, &PrincipalFrame<Dual1>::amb1, &PrincipalFrame<Dual1>::normal);
  }
  Vec2 omega23() const {
    return connection(along_u, along_v, &PrincipalFrame<Dual1>::amb2, &PrincipalFrame<Dual1>::normal);
  }
  Vec2 omega21() const { return connection(along_u, along_v, &PrincipalFrame<Dual1>::amb2, &PrincipalFrame<Dual1>::amb1); }
  Vec2 omega11() const { return connection(along_u, along_v, &PrincipalFrame<Dual1>::amb1, &PrincipalFrame<Dual1>::amb1); }
};

inline FrameJet frame_jet(const Jet3& j, const std::optional<Vec2>& hint = std::nullopt) {
  FrameJet fj;
  fj.at = principal_frame(truncate(j), hint);
  // Pin the sign of the lifted evaluations to the one chosen above.
  const Vec2 h = fj.at.e1;
  fj.along_u = principal_frame(directional_lift(j, {1.0, 0.0}), h);
  fj.along_v = principal_frame(directional_lift(j, {0.0, 1.0}), h);
  return fj;
}

// ---------------------------------------------------------------------------
// Double-valued operations on a surface at a parameter point.

struct TangentDir {
  Vec2 coords;   // parameter-coordinate components
  Vec3 ambient;  // φ_* of the vector
};

struct ShapeSpectrum {
  double kappa1 = 0.0, kappa2 = 0.0;
  TangentDir dir1, dir2;
  double alpha = 0.0;
};

inline std::pair<FundamentalForms<double>, Jet2<double>> forms_at(const SurfaceImmersion& s, const Vec2& p,
                                                                  DerivativeSource src = DerivativeSource::Auto) {
  const Jet2<double> j = truncate(s.jet(p, 2, src));
  return {fundamental_forms(j), j};
}

inline FundamentalForms<double> fundamental_forms(const SurfaceImmersion& s, const Vec2& p,
                                                  DerivativeSource src = DerivativeSource::Auto) {
  return forms_at(s, p, src).first;
}

inline double gaussian_curvature(const SurfaceImmersion& s, const Vec2& p,
                                 DerivativeSource src = DerivativeSource::Auto) {
  const auto f = fundamental_forms(s, p, src);
  return (f.L * f.N - f.M * f.M) / f.metric_det();
}

/// Eigenvalues (larger first) of the shape operator, no sign requirement.
inline std::pair<double, double> shape_eigenvalues(const SurfaceImmersion& s, const Vec2& p,
                                                   DerivativeSource src = DerivativeSource::Auto) {
  const ShapeOperator<double> op = shape_operator(fundamental_forms(s, p, src));
  const double half_tr = 0.5 * op.trace();
  const double half_diff = 0.5 * (op.a11 - op.a22);
  const double disc = std::fmax(half_diff * half_diff + op.a12 * op.a21, 0.0);
  return {half_tr + std::sqrt(disc), half_tr - std::sqrt(disc)};
}

inline ShapeSpectrum principal_data(const SurfaceImmersion& s, const Vec2& p,
                                    const std::optional<Vec2>& hint = std::nullopt,
                                    DerivativeSource src = DerivativeSource::Auto) {
  const Jet2<double> j = truncate(s.jet(p, 2, src));
  const PrincipalFrame<double> f = principal_frame(j, hint);
  return {f.kappa1, f.kappa2, {f.e1, f.amb1}, {f.e2, f.amb2}, f.alpha};
}

/// Euler's formula κ₁cos²β + κ₂sin²β for the unit direction at angle β from e₁.
inline double normal_curvature(const ShapeSpectrum& spec, double beta) {
  const double c = std::cos(beta), s = std::sin(beta);
  return spec.kappa1 * c * c + spec.kappa2 * s * s;
}

/// Same quantity through the second fundamental form on cos β e₁ + sin β e₂.
inline double normal_curvature_sff(const SurfaceImmersion& s, const Vec2& p, double beta,
                                   const std::optional<Vec2>& hint = std::nullopt) {
  const Jet2<double> j = truncate(s.jet(p, 2));
  const PrincipalFrame<double> f = principal_frame(j, hint);
  const Vec2 x = std::cos(beta) * f.e1 + std::sin(beta) * f.e2;
  return sff(f.forms, x);
}

struct AsymptoticFrame {
  Vec2 E1, E2;  // parameter-coordinate components
  Vec3 amb1, amb2;
  double alpha = 0.0;
  /// η¹, η² against (θ¹, θ²): η¹ = ½(sec α, −csc α), η² = ½(sec α, csc α).
  Vec2 eta1_frame, eta2_frame;
  /// η¹, η² against (du, dv): rows of the inverse of [E₁ E₂].
  Vec2 eta1_coords, eta2_coords;
};

inline AsymptoticFrame asymptotic_frame(const PrincipalFrame<double>& f) {
  AsymptoticFrame a;
  const double c = std::cos(f.alpha), s = std::sin(f.alpha);
  a.alpha = f.alpha;
  a.E1 = c * f.e1 - s * f.e2;
  a.E2 = c * f.e1 + s * f.e2;
  a.amb1 = c * f.amb1 - s * f.amb2;
  a.amb2 = c * f.amb1 + s * f.amb2;
  a.eta1_frame = {0.5 / c, -0.5 / s};
  a.eta2_frame = {0.5 / c, 0.5 / s};
  const double det = a.E1[0] * a.E2[1] - a.E2[0] * a.E1[1];
  a.eta1_coords = {a.E2[1] / det, -a.E2[0] / det};
  a.eta2_coords = {-a.E1[1] / det, a.E1[0] / det};
  return a;
}

inline AsymptoticFrame asymptotic_frame(const SurfaceImmersion& s, const Vec2& p,
                                        const std::optional<Vec2>& hint = std::nullopt) {
  return asymptotic_frame(principal_frame(truncate(s.jet(p, 2)), hint));
}

}  // namespace mframes
