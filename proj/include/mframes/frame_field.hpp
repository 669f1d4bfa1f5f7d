#pragma once

// Uniform parameter grids, scalar fields sampled on them, and the principal
// frame field with its sign fixed by continuity.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "surface.hpp"

namespace mframes {

struct Grid {
  ParamRect rect;
  int nu = 0, nv = 0;  // intervals per axis; nodes are (nu+1) × (nv+1)
  double hu = 0.0, hv = 0.0;

  /// Grid of spacing h over `rect`; h must divide both side lengths.
  static Grid over(const ParamRect& rect, double h) {
    if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
    if (!rect.valid()) throw DomainError("grid domain is empty");
    auto count = [h](double len, const char* axis) {
      const double q = len / h;
      const double n = std::round(q);
      if (std::fabs(q - n) > 1e-6 * std::fmax(1.0, q))
        throw DomainError(std::string("grid spacing does not divide the ") + axis + " side of the domain");
      return static_cast<int>(n);
    };
    return with_counts(rect, count(rect.u_max - rect.u_min, "u"), count(rect.v_max - rect.v_min, "v"));
  }

  static Grid with_counts(const ParamRect& rect, int nu, int nv) {
    if (nu < 4 || nv < 4) throw DomainError("grid needs at least 4 intervals per axis");
    Grid g;
    g.rect = rect;
    g.nu = nu;
    g.nv = nv;
    g.hu = (rect.u_max - rect.u_min) / nu;
    g.hv = (rect.v_max - rect.v_min) / nv;
    return g;
  }

  std::size_t size() const { return static_cast<std::size_t>(nu + 1) * static_cast<std::size_t>(nv + 1); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * (nu + 1) + i; }
  Vec2 point(int i, int j) const { return {rect.u_min + i * hu, rect.v_min + j * hv}; }
  bool interior(int i, int j) const { return i > 0 && j > 0 && i < nu && j < nv; }

  template <class F>
  void for_each(F&& f) const {
    for (int j = 0; j <= nv; ++j)
      for (int i = 0; i <= nu; ++i) f(i, j);
  }
};

/// Values on a grid with a per-node accuracy flag (cleared where one-sided
/// stencils were used) and an optional exact evaluator.
struct ScalarField {
  Grid grid;
  std::vector<double> values;
  std::vector<char> accurate;
  std::function<double(const Vec2&)> exact;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill), accurate(g.size(), 1) {}

  double& operator()(int i, int j) { return values[grid.index(i, j)]; }
  double operator()(int i, int j) const { return values[grid.index(i, j)]; }
  bool ok(int i, int j) const { return accurate[grid.index(i, j)] != 0; }
};

template <class F>
ScalarField sample(const Grid& g, F&& f) {
  ScalarField s(g);
  g.for_each([&](int i, int j) { s(i, j) = f(i, j); });
  return s;
}

namespace detail {

// Derivative along axis 0 (u) or 1 (v) of grid data: centered in the
// interior, second-order one-sided on the boundary (flagged inaccurate).
template <class T, class Get>
std::pair<std::vector<T>, std::vector<char>> grid_partial(const Grid& g, Get&& get, const std::vector<char>& acc,
                                                          int axis) {
  std::vector<T> out(g.size());
  std::vector<char> ok(g.size(), 0);
  const int n = axis == 0 ? g.nu : g.nv;
  const double h = axis == 0 ? g.hu : g.hv;
  auto at = [&](int i, int j, int k) -> std::pair<int, int> { return axis == 0 ? std::pair{k, j} : std::pair{i, k}; };
  g.for_each([&](int i, int j) {
    const int k = axis == 0 ? i : j;
    auto val = [&](int kk) {
      const auto [a, b] = at(i, j, kk);
      return get(a, b);
    };
    auto good = [&](int kk) {
      const auto [a, b] = at(i, j, kk);
      return acc[g.index(a, b)] != 0;
    };
    const std::size_t idx = g.index(i, j);
    if (k == 0) {
      out[idx] = (1.0 / (2.0 * h)) * (-3.0 * val(0) + 4.0 * val(1) - val(2));
    } else if (k == n) {
      out[idx] = (1.0 / (2.0 * h)) * (3.0 * val(n) - 4.0 * val(n - 1) + val(n - 2));
    } else {
      out[idx] = (1.0 / (2.0 * h)) * (val(k + 1) - val(k - 1));
      ok[idx] = good(k + 1) && good(k - 1);
    }
  });
  return {std::move(out), std::move(ok)};
}

inline std::vector<char> mask_and(const std::vector<char>& a, const std::vector<char>& b) {
  std::vector<char> r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] && b[k];
  return r;
}

}  // namespace detail

inline ScalarField partial(const ScalarField& f, int axis) {
  auto [vals, ok] = detail::grid_partial<double>(f.grid, [&](int i, int j) { return f(i, j); }, f.accurate, axis);
  ScalarField r(f.grid);
  r.values = std::move(vals);
  r.accurate = std::move(ok);
  return r;
}

/// Sampled frame data. For hyperbolic surfaces the frame is principal; the
/// coordinate-aligned variant (e₁ ∥ φ_u) serves surfaces without one.
struct FrameField {
  enum class Kind { Principal, CoordinateAligned };

  Grid grid;
  Kind kind = Kind::Principal;
  std::vector<PrincipalFrame<double>> frames;

  const PrincipalFrame<double>& at(int i, int j) const { return frames[grid.index(i, j)]; }
  double sqrt_g(int i, int j) const { return std::sqrt(at(i, j).forms.metric_det()); }

  ScalarField kappa1() const { return scalar(&PrincipalFrame<double>::kappa1); }
  ScalarField kappa2() const { return scalar(&PrincipalFrame<double>::kappa2); }
  ScalarField alpha() const { return scalar(&PrincipalFrame<double>::alpha); }

 private:
  ScalarField scalar(double PrincipalFrame<double>::*m) const {
    return sample(grid, [&](int i, int j) { return at(i, j).*m; });
  }
};

namespace detail {

inline void flip(PrincipalFrame<double>& f) {
  f.e1 = -f.e1;
  f.e2 = -f.e2;
  f.amb1 = -f.amb1;
  f.amb2 = -f.amb2;
}

// Minimum cosine between adjacent ambient e₁ samples; below this the
// propagation cannot tell a genuine turn from a sign flip.
inline constexpr double kContinuityCos = 1e-3;

}  // namespace detail

/// Principal frame on every grid node. The basepoint is node (0,0); signs are
/// propagated along the first row and then up each column.
inline FrameField frame_field(const SurfaceImmersion& s, const Grid& g) {
  if (!s.domain().contains(g.rect)) throw DomainError("grid domain leaves the surface domain");
  FrameField ff;
  ff.grid = g;
  ff.frames.resize(g.size());
  auto build = [&](int i, int j, const PrincipalFrame<double>* prev) {
    const Vec2 p = g.point(i, j);
    PrincipalFrame<double> f =
        principal_frame(truncate(s.jet(p, 2)), prev ? std::optional<Vec2>(prev->e1) : std::nullopt);
    if (prev) {
      double c = dot(f.amb1, prev->amb1);
      if (c < 0.0) {
        detail::flip(f);
        c = -c;
      }
      if (c < detail::kContinuityCos)
        throw ResolutionError("principal direction turns by about pi/2 between samples near (" +
                              std::to_string(p[0]) + ", " + std::to_string(p[1]) + "); refine the grid");
    }
    ff.frames[g.index(i, j)] = f;
  };
  build(0, 0, nullptr);
  for (int i = 1; i <= g.nu; ++i) build(i, 0, &ff.frames[g.index(i - 1, 0)]);
  for (int i = 0; i <= g.nu; ++i)
    for (int j = 1; j <= g.nv; ++j) build(i, j, &ff.frames[g.index(i, j - 1)]);
  return ff;
}

/// Orthonormal frame with e₁ = φ_u/|φ_u| and e₂ its quarter turn. Curvature
/// entries are left NaN; only the ambient frame is meaningful.
inline FrameField coordinate_frame_field(const SurfaceImmersion& s, const Grid& g) {
  if (!s.domain().contains(g.rect)) throw DomainError("grid domain leaves the surface domain");
  FrameField ff;
  ff.grid = g;
  ff.kind = FrameField::Kind::CoordinateAligned;
  ff.frames.resize(g.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  g.for_each([&](int i, int j) {
    const Jet2<double> jet = truncate(s.jet(g.point(i, j), 2));
    PrincipalFrame<double> f;
    f.forms = fundamental_forms(jet);
    f.e1 = Vec2{1.0 / std::sqrt(f.forms.E), 0.0};
    f.e2 = quarter_turn(f.forms, f.e1);
    f.amb1 = push_forward(jet, f.e1);
    f.amb2 = push_forward(jet, f.e2);
    f.normal = f.forms.normal;
    f.kappa1 = f.kappa2 = f.alpha = nan;
    ff.frames[g.index(i, j)] = f;
  });
  return ff;
}

}  // namespace mframes
