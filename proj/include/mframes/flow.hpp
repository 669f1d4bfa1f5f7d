#pragma once

// Integral curves of planar vector fields by the classical fourth-order
// Runge–Kutta method with a fixed step, validated by step halving.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "vec.hpp"

namespace mframes {

/// Velocity at a point, or nullopt where the field is undefined (outside the
/// patch, or where the surface stops being hyperbolic).
using VectorField = std::function<std::optional<Vec2>(const Vec2&)>;

struct FlowOptions {
  double step = 1e-3;
  bool validate = true;
  bool record_path = false;
};

struct FlowResult {
  Vec2 endpoint{};
  double time_reached = 0.0;  // signed, |time_reached| ≤ |T|
  bool exited = false;
  /// |y_h − y_{h/2}|/15 from the halving pass; NaN if not validated.
  double error_estimate = std::numeric_limits<double>::quiet_NaN();
  std::vector<Vec2> path;  // start, then one entry per step, if recorded
};

inline constexpr double kFlowTolerancePerUnitTime = 1e-9;

/// True when the halving estimate meets the per-unit-time tolerance.
inline bool flow_validated(const FlowResult& r, double T) {
  return r.error_estimate <= kFlowTolerancePerUnitTime * std::fmax(1.0, std::fabs(T));
}

namespace detail {

inline std::optional<Vec2> rk4_step(const VectorField& f, const Vec2& y, double dt) {
  const auto k1 = f(y);
  if (!k1) return std::nullopt;
  const auto k2 = f(y + (0.5 * dt) * *k1);
  if (!k2) return std::nullopt;
  const auto k3 = f(y + (0.5 * dt) * *k2);
  if (!k3) return std::nullopt;
  const auto k4 = f(y + dt * *k3);
  if (!k4) return std::nullopt;
  const auto next = y + (dt / 6.0) * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
  if (!f(next)) return std::nullopt;
  return next;
}

inline FlowResult run_fixed(const VectorField& f, const Vec2& start, double T, long steps, bool record) {
  FlowResult r;
  r.endpoint = start;
  if (record) r.path.push_back(start);
  if (steps == 0) {
    r.time_reached = T;
    return r;
  }
  const double dt = T / static_cast<double>(steps);
  Vec2 y = start;
  for (long k = 0; k < steps; ++k) {
    if (auto next = rk4_step(f, y, dt)) {
      y = *next;
      if (record) r.path.push_back(y);
      continue;
    }
    // Locate the exit by bisecting the length of the last step.
    double lo = 0.0, hi = dt;
    for (int it = 0; it < 60 && std::fabs(hi - lo) > 1e-14; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (rk4_step(f, y, mid)) lo = mid;
      else hi = mid;
    }
    if (lo != 0.0) {
      y = *rk4_step(f, y, lo);
      if (record) r.path.push_back(y);
    }
    r.endpoint = y;
    r.time_reached = static_cast<double>(k) * dt + lo;
    r.exited = true;
    return r;
  }
  r.endpoint = y;
  r.time_reached = T;
  return r;
}

}  // namespace detail

/// Follow `field` from `start` for time T (negative T runs backwards).
inline FlowResult integrate_flow(const VectorField& field, const Vec2& start, double T, const FlowOptions& opt = {}) {
  if (!field(start)) {
    FlowResult r;
    r.endpoint = start;
    r.exited = true;
    return r;
  }
  const long steps = T == 0.0 ? 0 : static_cast<long>(std::ceil(std::fabs(T) / opt.step - 1e-9));
  if (!opt.validate) return detail::run_fixed(field, start, T, steps, opt.record_path);
  const FlowResult coarse = detail::run_fixed(field, start, T, steps, false);
  FlowResult fine = detail::run_fixed(field, start, T, 2 * steps, opt.record_path);
  if (!coarse.exited && !fine.exited) fine.error_estimate = norm(fine.endpoint - coarse.endpoint) / 15.0;
  return fine;
}

}  // namespace mframes
