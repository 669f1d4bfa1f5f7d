#pragma once

// Poincaré disk model of the hyperbolic plane: conformal metric, distance,
// disk-preserving Möbius isometries and hyperbolic area of centered disks.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "errors.hpp"
#include "vec.hpp"

namespace mframes {

/// Points closer than this (in |z|²) to the unit circle are rejected.
inline constexpr double kDiskBoundaryMargin = 1e-12;

/// A point of the open unit disk.
class DiskPoint {
 public:
  DiskPoint() = default;
  DiskPoint(double x, double y) : x_(x), y_(y) {
    if (!(x * x + y * y < 1.0 - kDiskBoundaryMargin)) {
      throw DomainError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                        ") is not inside the unit disk");
    }
  }

  static DiskPoint origin() { return {}; }

  double x() const { return x_; }
  double y() const { return y_; }
  double norm2() const { return x_ * x_ + y_ * y_; }
  /// 1 − |p|², computed as (1 − |p|)(1 + |p|) to keep precision near the rim.
  double conformal_gap() const {
    const double r = std::hypot(x_, y_);
    return (1.0 - r) * (1.0 + r);
  }
  std::complex<double> as_complex() const { return {x_, y_}; }
  Vec2 as_vec() const { return {x_, y_}; }

  friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
};

/// Tangent vector at a disk point, stored by Euclidean components.
struct HTangent {
  DiskPoint base;
  double vx = 0.0;
  double vy = 0.0;
};

/// z ↦ (z − p)/(1 − p̄z) (ToOrigin) or z ↦ (z + p)/(1 + p̄z) (FromOrigin).
struct MobiusIsometry {
  enum class Direction { ToOrigin, FromOrigin };

  DiskPoint p;
  Direction direction = Direction::ToOrigin;

  MobiusIsometry inverse() const {
    return {p, direction == Direction::ToOrigin ? Direction::FromOrigin : Direction::ToOrigin};
  }
};

/// Conformal factor λ(p) = 2/(1 − |p|²); the metric is λ² times Euclidean.
inline double metric_scale(const DiskPoint& p) { return 2.0 / p.conformal_gap(); }

inline double hyp_inner(const HTangent& a, const HTangent& b) {
  if (!(a.base == b.base)) throw PreconditionError("hyp_inner: tangent vectors at different base points");
  const double lam = metric_scale(a.base);
  return lam * lam * (a.vx * b.vx + a.vy * b.vy);
}

inline double hyp_norm(const HTangent& t) { return metric_scale(t.base) * std::hypot(t.vx, t.vy); }

/// Hyperbolic distance. Evaluated as 2·asinh(|P−Q| / sqrt((1−|P|²)(1−|Q|²))),
/// which equals arccosh(1 + 2|P−Q|²/((1−|P|²)(1−|Q|²))) but keeps full
/// precision for nearby points.
inline double hyp_distance(const DiskPoint& p, const DiskPoint& q) {
  const double chord = std::hypot(p.x() - q.x(), p.y() - q.y());
  return 2.0 * std::asinh(chord / std::sqrt(p.conformal_gap() * q.conformal_gap()));
}

namespace detail {
inline std::complex<double> mobius_raw(const MobiusIsometry& m, std::complex<double> z) {
  const std::complex<double> p = m.p.as_complex();
  if (m.direction == MobiusIsometry::Direction::ToOrigin) return (z - p) / (1.0 - std::conj(p) * z);
  return (z + p) / (1.0 + std::conj(p) * z);
}
// Complex derivative of the map at z: (1 − |p|²)/(1 ∓ p̄z)².
inline std::complex<double> mobius_derivative(const MobiusIsometry& m, std::complex<double> z) {
  const std::complex<double> p = m.p.as_complex();
  const double gap = m.p.conformal_gap();
  const std::complex<double> den =
      m.direction == MobiusIsometry::Direction::ToOrigin ? 1.0 - std::conj(p) * z : 1.0 + std::conj(p) * z;
  return gap / (den * den);
}
}  // namespace detail

inline DiskPoint mobius_apply(const MobiusIsometry& m, const DiskPoint& z) {
  const auto w = detail::mobius_raw(m, z.as_complex());
  return {w.real(), w.imag()};
}

/// Differential of the Möbius map applied to a tangent vector.
inline HTangent mobius_pushforward(const MobiusIsometry& m, const HTangent& t) {
  const auto z = t.base.as_complex();
  const auto w = detail::mobius_derivative(m, z) * std::complex<double>(t.vx, t.vy);
  return {mobius_apply(m, t.base), w.real(), w.imag()};
}

/// Closed form 2π(2/(1 − t²) − 2) of the hyperbolic area of {|z| ≤ t}.
inline double disk_area_closed_form(double t) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("disk area radius must lie in (0, 1)");
  return 2.0 * std::numbers::pi * (2.0 / ((1.0 - t) * (1.0 + t)) - 2.0);
}

/// Hyperbolic area of the Euclidean disk of radius t about O by quadrature of
/// 4r/(1−r²)² dr dθ: composite Simpson in r (`resolution` intervals, rounded
/// up to even), periodic trapezoid in θ.
inline double disk_area(double t, int resolution) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("disk area radius must lie in (0, 1)");
  if (resolution < 2) throw DomainError("disk area quadrature needs at least 2 intervals");
  const int n = resolution + (resolution % 2);
  const double h = t / n;
  auto integrand = [](double r) {
    const double gap = (1.0 - r) * (1.0 + r);
    return 4.0 * r / (gap * gap);
  };
  double radial = integrand(0.0) + integrand(t);
  for (int k = 1; k < n; ++k) radial += (k % 2 ? 4.0 : 2.0) * integrand(k * h);
  radial *= h / 3.0;

  // The integrand does not depend on the angle; the periodic trapezoid rule
  // is exact for it and is kept explicit.
  constexpr int kAngular = 64;
  double angular = 0.0;
  for (int k = 0; k < kAngular; ++k) angular += radial;
  return angular * (2.0 * std::numbers::pi / kAngular);
}

struct InvarianceResiduals {
  double distance = 0.0;  // max |d(mP, mQ) − d(P, Q)|
  double norm = 0.0;      // max | |m_* v| − |v| | for hyperbolic-unit v
};

/// Random points (|z| ≤ rmax, area-uniform), tangents and isometries.
inline InvarianceResiduals mobius_invariance(int samples, unsigned seed, double rmax = 0.9) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> g;
  auto point = [&] {
    const double r = rmax * std::sqrt(u01(rng)), a = 2.0 * std::numbers::pi * u01(rng);
    return DiskPoint(r * std::cos(a), r * std::sin(a));
  };
  InvarianceResiduals out;
  for (int k = 0; k < samples; ++k) {
    const MobiusIsometry m{point(), u01(rng) < 0.5 ? MobiusIsometry::Direction::ToOrigin
                                                   : MobiusIsometry::Direction::FromOrigin};
    const DiskPoint p = point(), q = point();
    out.distance = std::fmax(out.distance,
                             std::fabs(hyp_distance(mobius_apply(m, p), mobius_apply(m, q)) - hyp_distance(p, q)));
    HTangent t{p, g(rng), g(rng)};
    const double len = hyp_norm(t);
    t.vx /= len;
    t.vy /= len;
    out.norm = std::fmax(out.norm, std::fabs(hyp_norm(mobius_pushforward(m, t)) - hyp_norm(t)));
  }
  return out;
}

}  // namespace mframes
