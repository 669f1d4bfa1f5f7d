#pragma once

// Parametric immersed surfaces φ: [u_min,u_max]×[v_min,v_max] → ℝ³ with
// partial derivatives up to total order 3, either supplied analytically or
// obtained by nested forward-mode dual numbers.

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>

#include "dual.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "vec.hpp"

namespace mframes {

struct ParamRect {
  double u_min = 0.0, u_max = 0.0, v_min = 0.0, v_max = 0.0;

  bool contains(const Vec2& p) const { return p[0] >= u_min && p[0] <= u_max && p[1] >= v_min && p[1] <= v_max; }
  bool contains(const ParamRect& r) const {
    return r.u_min >= u_min && r.u_max <= u_max && r.v_min >= v_min && r.v_max <= v_max;
  }
  bool valid() const { return u_min < u_max && v_min < v_max; }
};

/// Position and partial derivatives of φ at one parameter point. Entries above
/// the requested order are left zero.
struct Jet3 {
  Vec3 p{}, u{}, v{}, uu{}, uv{}, vv{}, uuu{}, uuv{}, uvv{}, vvv{};
  int order = 3;
};

/// Second-order jet over an arbitrary scalar (used to push derivative
/// information through the pointwise geometry).
template <class T>
struct Jet2 {
  Vec3T<T> p{}, u{}, v{}, uu{}, uv{}, vv{};
};

inline Jet2<double> truncate(const Jet3& j) { return {j.p, j.u, j.v, j.uu, j.uv, j.vv}; }

/// Lift a third-order jet to a second-order jet over Dual1 whose dual parts
/// are the derivatives along the parameter direction `dir`.
inline Jet2<Dual1> directional_lift(const Jet3& j, const Vec2& dir) {
  const double a = dir[0], b = dir[1];
  auto lift = [](const Vec3& val, const Vec3& der) {
    return Vec3T<Dual1>{Dual1(val[0], der[0]), Dual1(val[1], der[1]), Dual1(val[2], der[2])};
  };
  return {lift(j.p, a * j.u + b * j.v),        lift(j.u, a * j.uu + b * j.uv),   lift(j.v, a * j.uv + b * j.vv),
          lift(j.uu, a * j.uuu + b * j.uuv), lift(j.uv, a * j.uuv + b * j.uvv), lift(j.vv, a * j.uvv + b * j.vvv)};
}

enum class DerivativeSource { Auto, Analytic, AutoDiff };

namespace detail {

inline Dual1 seed1(double x, double s) { return {x, s}; }
inline Dual2 seed2(double x, double s1, double s2) { return {Dual1(x, s2), Dual1(s1, 0.0)}; }
inline Dual3 seed3(double x, double s1, double s2, double s3) {
  return {Dual2(Dual1(x, s3), Dual1(s2, 0.0)), Dual2(Dual1(s1, 0.0), Dual1(0.0, 0.0))};
}

// Rewrite a third-order jet taken in coordinates (s, t) into coordinates
// (u, v) related by ∂u = a ∂s + b ∂t, ∂v = c ∂s + d ∂t (a linear chart).
inline Jet3 linear_chart(const Jet3& st, double a, double b, double c, double d) {
  // Symmetric derivative tensors indexed by 0 = s, 1 = t.
  const Vec3 d1[2] = {st.u, st.v};
  const Vec3 d2[2][2] = {{st.uu, st.uv}, {st.uv, st.vv}};
  auto d3 = [&](int i, int j, int k) -> const Vec3& {
    const int ones = i + j + k;
    switch (ones) {
      case 0: return st.uuu;
      case 1: return st.uuv;
      case 2: return st.uvv;
      default: return st.vvv;
    }
  };
  const double w[2][2] = {{a, b}, {c, d}};  // w[dir][coord]
  auto first = [&](int x) {
    Vec3 r{};
    for (int i = 0; i < 2; ++i) r = r + w[x][i] * d1[i];
    return r;
  };
  auto second = [&](int x, int y) {
    Vec3 r{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r = r + (w[x][i] * w[y][j]) * d2[i][j];
    return r;
  };
  auto third = [&](int x, int y, int z) {
    Vec3 r{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) r = r + (w[x][i] * w[y][j] * w[z][k]) * d3(i, j, k);
    return r;
  };
  Jet3 out;
  out.order = st.order;
  out.p = st.p;
  out.u = first(0);
  out.v = first(1);
  out.uu = second(0, 0);
  out.uv = second(0, 1);
  out.vv = second(1, 1);
  out.uuu = third(0, 0, 0);
  out.uuv = third(0, 0, 1);
  out.uvv = third(0, 1, 1);
  out.vvv = third(1, 1, 1);
  return out;
}

}  // namespace detail

class SurfaceImmersion {
 public:
  using AnalyticJet = std::function<Jet3(double, double)>;

  /// Build from a generic callable `f(u, v) -> std::array<T, 3>` usable with
  /// T = double and the nested dual types.
  template <class F>
  static SurfaceImmersion from_generic(std::string name, ParamRect domain, F f) {
    SurfaceImmersion s;
    s.name_ = std::move(name);
    s.domain_ = domain;
    auto shared = std::make_shared<F>(std::move(f));
    s.f0_ = [shared](double u, double v) { return as_vec<double>((*shared)(u, v)); };
    s.f1_ = [shared](Dual1 u, Dual1 v) { return as_vec<Dual1>((*shared)(u, v)); };
    s.f2_ = [shared](Dual2 u, Dual2 v) { return as_vec<Dual2>((*shared)(u, v)); };
    s.f3_ = [shared](Dual3 u, Dual3 v) { return as_vec<Dual3>((*shared)(u, v)); };
    return s;
  }

  SurfaceImmersion with_analytic(AnalyticJet jet) const {
    SurfaceImmersion s = *this;
    s.analytic_ = std::move(jet);
    return s;
  }
  /// Same surface with derivatives always taken by automatic differentiation.
  SurfaceImmersion without_analytic() const {
    SurfaceImmersion s = *this;
    s.analytic_ = nullptr;
    return s;
  }
  SurfaceImmersion with_domain(const ParamRect& d) const {
    SurfaceImmersion s = *this;
    s.domain_ = d;
    return s;
  }
  SurfaceImmersion with_name(std::string n) const {
    SurfaceImmersion s = *this;
    s.name_ = std::move(n);
    return s;
  }

  const std::string& name() const { return name_; }
  const ParamRect& domain() const { return domain_; }
  bool has_analytic() const { return static_cast<bool>(analytic_); }

  Vec3 position(const Vec2& p) const { return f0_(p[0], p[1]); }

  template <class T>
  Vec3T<T> evaluate(const T& u, const T& v) const {
    if constexpr (std::is_same_v<T, double>) return f0_(u, v);
    else if constexpr (std::is_same_v<T, Dual1>) return f1_(u, v);
    else if constexpr (std::is_same_v<T, Dual2>) return f2_(u, v);
    else return f3_(u, v);
  }

  /// Partials of φ up to total order `order` (1, 2 or 3).
  Jet3 jet(const Vec2& p, int order = 3, DerivativeSource src = DerivativeSource::Auto) const {
    if (src == DerivativeSource::Analytic && !analytic_)
      throw PreconditionError("surface '" + name_ + "' has no analytic partials");
    if (analytic_ && src != DerivativeSource::AutoDiff) {
      Jet3 j = analytic_(p[0], p[1]);
      j.order = 3;
      return j;
    }
    return ad_jet(p, order);
  }

 private:
  template <class T, class A>
  static Vec3T<T> as_vec(const A& a) {
    return {T(a[0]), T(a[1]), T(a[2])};
  }

  Jet3 ad_jet(const Vec2& p, int order) const {
    const double u = p[0], v = p[1];
    Jet3 j;
    j.order = order;
    if (order <= 1) {
      const auto fu = f1_(detail::seed1(u, 1), detail::seed1(v, 0));
      const auto fv = f1_(detail::seed1(u, 0), detail::seed1(v, 1));
      for (int k = 0; k < 3; ++k) {
        j.p[k] = fu[k].v;
        j.u[k] = fu[k].d;
        j.v[k] = fv[k].d;
      }
      return j;
    }
    if (order == 2) {
      const auto fuv = f2_(detail::seed2(u, 1, 0), detail::seed2(v, 0, 1));
      const auto fuu = f2_(detail::seed2(u, 1, 1), detail::seed2(v, 0, 0));
      const auto fvv = f2_(detail::seed2(u, 0, 0), detail::seed2(v, 1, 1));
      for (int k = 0; k < 3; ++k) {
        j.p[k] = fuv[k].v.v;
        j.u[k] = fuv[k].d.v;
        j.v[k] = fuv[k].v.d;
        j.uv[k] = fuv[k].d.d;
        j.uu[k] = fuu[k].d.d;
        j.vv[k] = fvv[k].d.d;
      }
      return j;
    }
    // Seeds (outer, middle, inner) directions: uuu, uuv, uvv, vvv.
    const auto a = f3_(detail::seed3(u, 1, 1, 1), detail::seed3(v, 0, 0, 0));
    const auto b = f3_(detail::seed3(u, 1, 1, 0), detail::seed3(v, 0, 0, 1));
    const auto c = f3_(detail::seed3(u, 1, 0, 0), detail::seed3(v, 0, 1, 1));
    const auto d = f3_(detail::seed3(u, 0, 0, 0), detail::seed3(v, 1, 1, 1));
    for (int k = 0; k < 3; ++k) {
      j.p[k] = a[k].v.v.v;
      j.u[k] = a[k].d.v.v;
      j.uu[k] = a[k].d.d.v;
      j.uuu[k] = a[k].d.d.d;
      j.uv[k] = b[k].d.v.d;
      j.uuv[k] = b[k].d.d.d;
      j.uvv[k] = c[k].d.d.d;
      j.v[k] = d[k].d.v.v;
      j.vv[k] = d[k].d.d.v;
      j.vvv[k] = d[k].d.d.d;
    }
    return j;
  }

  std::string name_;
  ParamRect domain_;
  std::function<Vec3T<double>(double, double)> f0_;
  std::function<Vec3T<Dual1>(Dual1, Dual1)> f1_;
  std::function<Vec3T<Dual2>(Dual2, Dual2)> f2_;
  std::function<Vec3T<Dual3>(Dual3, Dual3)> f3_;
  AnalyticJet analytic_;
};

/// Compose with the dilation x ↦ k·x of ℝ³.
inline SurfaceImmersion dilate(const SurfaceImmersion& s, double k) {
  if (!(k > 0.0)) throw DomainError("dilation factor must be positive");
  auto base = std::make_shared<const SurfaceImmersion>(s);
  auto scaled = SurfaceImmersion::from_generic(s.name() + " dilated", s.domain(), [base, k](auto u, auto v) {
    auto r = base->evaluate(u, v);
    for (auto& x : r) x = x * k;
    return r;
  });
  if (s.has_analytic()) {
    scaled = scaled.with_analytic([base, k](double u, double v) {
      Jet3 j = base->jet({u, v}, 3, DerivativeSource::Analytic);
      for (Vec3* e : {&j.p, &j.u, &j.v, &j.uu, &j.uv, &j.vv, &j.uuu, &j.uuv, &j.uvv, &j.vvv}) *e = k * *e;
      return j;
    });
  }
  return scaled;
}

}  // namespace mframes
