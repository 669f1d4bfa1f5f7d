#pragma once

// Picard iteration for unit-speed fields on the Poincaré disk. A field of
// hyperbolic length one has Euclidean speed (1 − |y|²)/2 ≤ 1/2, so with
// a = 1 and b = 1/2 the existence interval is ε = min(a, b/M) = 1.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "flow.hpp"
#include "hyperbolic.hpp"

namespace mframes {

/// Euclidean components of a tangent field on the open unit disk.
using DiskField = std::function<Vec2(const Vec2&)>;

/// Field ((1 − |y|²)/2)(cos φ(y), sin φ(y)), of hyperbolic length one.
inline DiskField unit_field_from_angle(std::function<double(const Vec2&)> phi) {
  return [phi = std::move(phi)](const Vec2& y) {
    const double speed = 0.5 * (1.0 - dot(y, y));
    const double a = phi(y);
    return Vec2{speed * std::cos(a), speed * std::sin(a)};
  };
}

/// Push a field forward by a Möbius isometry: (m_* E)(w) = Dm · E(m⁻¹(w)).
inline DiskField pushforward_field(const DiskField& field, const MobiusIsometry& m) {
  return [field, m](const Vec2& w) {
    const DiskPoint z = mobius_apply(m.inverse(), DiskPoint(w[0], w[1]));
    const Vec2 e = field(z.as_vec());
    const HTangent t = mobius_pushforward(m, {z, e[0], e[1]});
    return Vec2{t.vx, t.vy};
  };
}

struct PicardOptions {
  double a = 1.0;  // time half-width
  double b = 0.5;  // ball radius
  double M = 0.5;  // speed bound
  int intervals = 4000;
  int max_iterations = 80;
  double unit_tolerance = 1e-8;
  int unit_samples = 2000;
  unsigned seed = 7;
};

struct PicardResult {
  double epsilon = 0.0;
  int iterations = 0;
  std::vector<double> successive_differences;  // sup |y_{k+1} − y_k|
  double lipschitz_estimate = 0.0;
  double max_contraction_ratio = 0.0;
  double max_speed = 0.0;   // Euclidean speed along all iterates
  double max_radius = 0.0;  // max |y| along all iterates
  double residual = 0.0;    // integral-equation residual of the last iterate
  double rk4_difference = 0.0;
  std::vector<double> times;
  std::vector<Vec2> solution;
  bool certified = false;
};

namespace detail {

inline void require_unit_field(const DiskField& f, const PicardOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> r01(0.0, 1.0);
  for (int k = 0; k < opt.unit_samples; ++k) {
    const double r = 0.99 * std::sqrt(r01(rng)), t = 2.0 * std::numbers::pi * r01(rng);
    const DiskPoint p(r * std::cos(t), r * std::sin(t));
    const Vec2 e = f(p.as_vec());
    const double len = hyp_norm({p, e[0], e[1]});
    if (!(std::fabs(len - 1.0) < opt.unit_tolerance))
      throw PreconditionError("field does not have hyperbolic length one: |E| = " + std::to_string(len) + " at (" +
                              std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")");
  }
}

// Largest spectral norm of the field's Jacobian over the closed ball of
// radius b, by central differences on a polar sample.
inline double lipschitz_estimate(const DiskField& f, double b) {
  constexpr int kRadial = 40, kAngular = 96;
  constexpr double d = 1e-6;
  double L = 0.0;
  for (int i = 0; i <= kRadial; ++i)
    for (int j = 0; j < kAngular; ++j) {
      const double r = b * i / kRadial, t = 2.0 * std::numbers::pi * j / kAngular;
      const Vec2 y{r * std::cos(t), r * std::sin(t)};
      const Vec2 cu = (1.0 / (2 * d)) * (f(y + Vec2{d, 0}) - f(y - Vec2{d, 0}));
      const Vec2 cv = (1.0 / (2 * d)) * (f(y + Vec2{0, d}) - f(y - Vec2{0, d}));
      // Largest singular value of [cu cv].
      const double p = dot(cu, cu), q = dot(cv, cv), s = dot(cu, cv);
      const double top = 0.5 * (p + q) + std::sqrt(0.25 * (p - q) * (p - q) + s * s);
      L = std::fmax(L, std::sqrt(top));
    }
  return L;
}

}  // namespace detail

/// Picard iteration y_{k+1}(t) = ∫₀ᵗ E(y_k) from O on t ∈ [−ε, ε], on a
/// uniform grid with the cumulative trapezoid rule.
inline PicardResult picard_existence_demo(const DiskField& field, const PicardOptions& opt = {}) {
  detail::require_unit_field(field, opt);
  PicardResult res;
  res.epsilon = std::fmin(opt.a, opt.b / opt.M);
  const int n = opt.intervals + (opt.intervals % 2);  // even, origin at the middle node
  const int mid = n / 2;
  const double h = 2.0 * res.epsilon / n;
  res.times.resize(n + 1);
  for (int k = 0; k <= n; ++k) res.times[k] = -res.epsilon + k * h;

  std::vector<Vec2> y(n + 1, Vec2{0.0, 0.0});
  std::vector<Vec2> vel(n + 1);
  auto velocities = [&](const std::vector<Vec2>& path) {
    for (int k = 0; k <= n; ++k) {
      vel[k] = field(path[k]);
      res.max_speed = std::fmax(res.max_speed, norm(vel[k]));
      res.max_radius = std::fmax(res.max_radius, norm(path[k]));
    }
  };
  auto integrate = [&]() {
    std::vector<Vec2> out(n + 1);
    out[mid] = {0.0, 0.0};
    for (int k = mid + 1; k <= n; ++k) out[k] = out[k - 1] + (0.5 * h) * (vel[k - 1] + vel[k]);
    for (int k = mid - 1; k >= 0; --k) out[k] = out[k + 1] - (0.5 * h) * (vel[k + 1] + vel[k]);
    return out;
  };

  res.lipschitz_estimate = detail::lipschitz_estimate(field, opt.b);
  for (int it = 0; it < opt.max_iterations; ++it) {
    velocities(y);
    std::vector<Vec2> next = integrate();
    double diff = 0.0;
    for (int k = 0; k <= n; ++k) diff = std::fmax(diff, norm(next[k] - y[k]));
    res.successive_differences.push_back(diff);
    y = std::move(next);
    res.iterations = it + 1;
    if (diff < 1e-15) break;
  }
  velocities(y);
  const auto& d = res.successive_differences;
  for (std::size_t k = 1; k < d.size(); ++k)
    if (d[k - 1] > 1e-12) res.max_contraction_ratio = std::fmax(res.max_contraction_ratio, d[k] / d[k - 1]);

  // Integral-equation residual with an independent rule: Simpson on node pairs.
  for (int dir : {1, -1}) {
    Vec2 acc{0.0, 0.0};
    for (int k = mid; dir > 0 ? k + 2 <= n : k - 2 >= 0; k += 2 * dir) {
      acc = acc + (dir * h / 3.0) * (vel[k] + 4.0 * vel[k + dir] + vel[k + 2 * dir]);
      res.residual = std::fmax(res.residual, norm(y[k + 2 * dir] - acc));
    }
  }

  // Independent solution by RK4 from the origin in both directions.
  const VectorField flow = [&](const Vec2& p) -> std::optional<Vec2> {
    if (!(dot(p, p) < 1.0)) return std::nullopt;
    return field(p);
  };
  for (int dir : {1, -1}) {
    Vec2 p{0.0, 0.0};
    for (int k = mid; dir > 0 ? k < n : k > 0; k += dir) {
      p = integrate_flow(flow, p, dir * h, {.step = h, .validate = false}).endpoint;
      res.rk4_difference = std::fmax(res.rk4_difference, norm(p - y[k + dir]));
    }
  }

  res.solution = y;
  const bool converged = !d.empty() && d.back() < 1e-12;
  res.certified = converged && res.max_radius <= opt.b + 1e-12 && res.max_speed <= opt.M + 1e-10 &&
                  res.max_contraction_ratio <= res.lipschitz_estimate * res.epsilon && res.residual < 1e-6;
  return res;
}

struct RecenteredPicard {
  PicardResult at_origin;           // run for the pushed-forward field
  std::vector<Vec2> solution;       // mapped back, passes through P at t = 0
  double hyperbolic_speed_error = 0.0;  // max |(hyperbolic speed) − 1| along the mapped curve
};

/// Run the demo at P by moving P to O with a Möbius isometry, then map back.
inline RecenteredPicard picard_recentered(const DiskField& field, const DiskPoint& P, const PicardOptions& opt = {}) {
  const MobiusIsometry to_origin{P, MobiusIsometry::Direction::ToOrigin};
  RecenteredPicard r;
  r.at_origin = picard_existence_demo(pushforward_field(field, to_origin), opt);
  const MobiusIsometry back = to_origin.inverse();
  for (const Vec2& w : r.at_origin.solution) r.solution.push_back(mobius_apply(back, DiskPoint(w[0], w[1])).as_vec());
  const auto& t = r.at_origin.times;
  for (std::size_t k = 1; k + 1 < r.solution.size(); ++k) {
    const Vec2 v = (1.0 / (t[k + 1] - t[k - 1])) * (r.solution[k + 1] - r.solution[k - 1]);
    const DiskPoint base(r.solution[k][0], r.solution[k][1]);
    r.hyperbolic_speed_error = std::fmax(r.hyperbolic_speed_error, std::fabs(hyp_norm({base, v[0], v[1]}) - 1.0));
  }
  return r;
}

/// Five unit fields used by the demo and its tests.
inline std::vector<std::pair<std::string, DiskField>> sample_unit_fields() {
  return {
      {"constant_east", unit_field_from_angle([](const Vec2&) { return 0.0; })},
      {"constant_2rad", unit_field_from_angle([](const Vec2&) { return 2.0; })},
      {"linear_turn", unit_field_from_angle([](const Vec2& y) { return y[0] + 0.5 * y[1]; })},
      {"wavy", unit_field_from_angle([](const Vec2& y) { return 1.0 + std::sin(2.0 * y[0]) * std::cos(y[1]); })},
      {"saddle_turn", unit_field_from_angle([](const Vec2& y) { return 0.3 + 3.0 * y[0] * y[1]; })},
  };
}

}  // namespace mframes
