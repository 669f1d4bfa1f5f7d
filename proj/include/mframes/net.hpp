#pragma once

// Chebyshev net of a K = −1 patch: the coordinate map G obtained by flowing
// along the asymptotic fields, the angle field Θ = 2α on the lattice, and the
// checks built on it (sine-Gordon, area, F∘G, flow commutation).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "flow.hpp"
#include "geometry.hpp"
#include "surface.hpp"

namespace mframes {

/// Asymptotic field E₁ (which = 1) or E₂ (which = 2) in parameter coordinates.
/// `reference` fixes the sign of e₁ (and so of E₁, E₂) by continuity.
inline VectorField asymptotic_field(const SurfaceImmersion& s, int which, const Vec2& reference) {
  if (which != 1 && which != 2) throw DomainError("asymptotic field index must be 1 or 2");
  return [s, which, reference](const Vec2& p) -> std::optional<Vec2> {
    if (!s.domain().contains(p)) return std::nullopt;
    try {
      const AsymptoticFrame a = asymptotic_frame(s, p, reference);
      return which == 1 ? a.E1 : a.E2;
    } catch (const NotHyperbolicError&) {
      return std::nullopt;
    } catch (const ImmersionError&) {
      return std::nullopt;
    }
  };
}

/// e₁ at `origin` under the basepoint sign rule.
inline Vec2 reference_direction(const SurfaceImmersion& s, const Vec2& origin) {
  return principal_data(s, origin).dir1.coords;
}

struct NetGrid {
  Vec2 origin{};
  Vec2 reference{};  // e₁ at the origin; orients E₁, E₂
  double a = 0.0;
  int n = 0;  // intervals per axis
  double h = 0.0;
  int substeps = 0;  // flow steps per lattice cell
  std::vector<std::optional<Vec2>> points;
  std::vector<double> theta;  // NaN at missing points
  /// Max |y_h − y_{h/2}|/15 over the validated legs, per unit time.
  double flow_error_estimate = 0.0;

  // Flow polylines at substep resolution: the E₁ leg through the origin in
  // each direction, and for column i the E₂ legs in each direction.
  std::vector<Vec2> leg_plus, leg_minus;
  std::vector<std::vector<Vec2>> column_plus, column_minus;

  int mid() const { return n / 2; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * (n + 1) + i; }
  double x(int i) const { return n == 0 ? 0.0 : -a + i * h; }
  bool valid(int i, int j) const { return points[index(i, j)].has_value(); }
  const Vec2& point(int i, int j) const { return *points[index(i, j)]; }
  double angle(int i, int j) const { return theta[index(i, j)]; }
  std::size_t valid_count() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](auto& p) { return p.has_value(); }));
  }

  /// Largest b = k·h such that the lattice square [−b, b]² is fully valid.
  double largest_valid_half_width() const {
    int best = -1;
    for (int k = 0; k <= mid(); ++k) {
      bool ok = true;
      for (int j = mid() - k; j <= mid() + k && ok; ++j)
        for (int i = mid() - k; i <= mid() + k && ok; ++i) ok = valid(i, j);
      if (!ok) break;
      best = k;
    }
    return best < 0 ? -1.0 : best * h;
  }
};

struct NetOptions {
  /// Validate every `validation_stride`-th column by step halving.
  int validation_stride = 8;
};

namespace detail {

// Follow `field` cell by cell; returns lattice points reached (nullopt after
// an exit) and appends the substep polyline to `path`.
inline std::vector<std::optional<Vec2>> march(const VectorField& field, const Vec2& start, double cell, int cells,
                                              int substeps, std::vector<Vec2>* path) {
  std::vector<std::optional<Vec2>> out;
  out.reserve(cells);
  Vec2 y = start;
  bool alive = true;
  if (path) path->push_back(start);
  for (int c = 0; c < cells; ++c) {
    if (!alive) {
      out.push_back(std::nullopt);
      continue;
    }
    FlowResult r = integrate_flow(field, y, cell,
                                  {.step = std::fabs(cell) / substeps, .validate = false, .record_path = path != nullptr});
    if (path) path->insert(path->end(), r.path.begin() + 1, r.path.end());
    if (r.exited) {
      alive = false;
      out.push_back(std::nullopt);
      continue;
    }
    y = r.endpoint;
    out.push_back(y);
  }
  return out;
}

inline double halving_error(const VectorField& field, const Vec2& start, double cell, int cells, int substeps,
                            const std::vector<std::optional<Vec2>>& reached) {
  const auto finer = march(field, start, cell, cells, 2 * substeps, nullptr);
  double worst = 0.0;
  for (int c = 0; c < cells; ++c) {
    if (!reached[c] || !finer[c]) break;
    const double t = std::fabs(cell) * (c + 1);
    worst = std::fmax(worst, norm(*reached[c] - *finer[c]) / 15.0 / std::fmax(1.0, t));
  }
  return worst;
}

}  // namespace detail

/// G on the (n+1)² lattice of [−a, a]²: E₁ for time x¹ from the origin, then
/// E₂ for time x². Points whose flow leaves the patch are missing.
inline NetGrid build_net(const SurfaceImmersion& s, const Vec2& origin, double a, int n, const NetOptions& opt = {}) {
  if (!(a >= 0.0)) throw DomainError("net half-width must be non-negative");
  if (!s.domain().contains(origin)) throw DomainError("net origin lies outside the surface domain");
  NetGrid net;
  net.origin = origin;
  net.reference = reference_direction(s, origin);
  net.a = a;
  if (a == 0.0) {
    net.points = {origin};
    net.theta = {2.0 * principal_data(s, origin).alpha};
    return net;
  }
  if (n < 4 || n % 2 != 0) throw DomainError("net needs an even number n >= 4 of intervals per axis");
  net.n = n;
  net.h = 2.0 * a / n;
  const double h_flow = std::fmin(1e-3, net.h / 10.0);
  net.substeps = static_cast<int>(std::ceil(net.h / h_flow - 1e-9));
  const int m = net.mid();
  net.points.assign(static_cast<std::size_t>(n + 1) * (n + 1), std::nullopt);
  net.theta.assign(net.points.size(), std::numeric_limits<double>::quiet_NaN());
  net.column_plus.resize(n + 1);
  net.column_minus.resize(n + 1);

  const VectorField e1 = asymptotic_field(s, 1, net.reference);
  const VectorField e2 = asymptotic_field(s, 2, net.reference);
  if (!e1(origin) || !e2(origin)) throw PreconditionError("asymptotic fields are undefined at the net origin");

  // First leg along E₁.
  std::vector<std::optional<Vec2>> row(n + 1);
  row[m] = origin;
  const auto plus = detail::march(e1, origin, net.h, m, net.substeps, &net.leg_plus);
  const auto minus = detail::march(e1, origin, -net.h, m, net.substeps, &net.leg_minus);
  for (int k = 0; k < m; ++k) {
    row[m + 1 + k] = plus[k];
    row[m - 1 - k] = minus[k];
  }
  net.flow_error_estimate = std::fmax(detail::halving_error(e1, origin, net.h, m, net.substeps, plus),
                                      detail::halving_error(e1, origin, -net.h, m, net.substeps, minus));
  if (!plus.front() && !minus.front()) throw PreconditionError("flow along E1 leaves the patch immediately");

  // Second legs along E₂ from every row point.
  for (int i = 0; i <= n; ++i) {
    if (!row[i]) continue;
    net.points[net.index(i, m)] = row[i];
    const auto up = detail::march(e2, *row[i], net.h, m, net.substeps, &net.column_plus[i]);
    const auto down = detail::march(e2, *row[i], -net.h, m, net.substeps, &net.column_minus[i]);
    for (int k = 0; k < m; ++k) {
      net.points[net.index(i, m + 1 + k)] = up[k];
      net.points[net.index(i, m - 1 - k)] = down[k];
    }
    if (opt.validation_stride > 0 && (i - m) % opt.validation_stride == 0) {
      net.flow_error_estimate = std::fmax(net.flow_error_estimate,
                                          detail::halving_error(e2, *row[i], net.h, m, net.substeps, up));
      net.flow_error_estimate = std::fmax(net.flow_error_estimate,
                                          detail::halving_error(e2, *row[i], -net.h, m, net.substeps, down));
    }
  }
  if (net.valid_count() <= 1) throw PreconditionError("net has no points besides the origin");

  for (std::size_t k = 0; k < net.points.size(); ++k)
    if (net.points[k]) net.theta[k] = 2.0 * std::atan(principal_data(s, *net.points[k], net.reference).kappa1);
  return net;
}

// ---------------------------------------------------------------------------

struct SineGordonReport {
  double residual = 0.0;
  std::size_t points = 0;
};

/// max |(Θ₊₊ − Θ₊₋ − Θ₋₊ + Θ₋₋)/(4h²) − sin Θ| over interior points whose
/// four diagonal neighbours are present.
inline SineGordonReport sine_gordon_residual(const NetGrid& net) {
  SineGordonReport r;
  for (int j = 1; j < net.n; ++j)
    for (int i = 1; i < net.n; ++i) {
      if (!net.valid(i, j) || !net.valid(i + 1, j + 1) || !net.valid(i + 1, j - 1) || !net.valid(i - 1, j + 1) ||
          !net.valid(i - 1, j - 1))
        continue;
      const double cross = (net.angle(i + 1, j + 1) - net.angle(i + 1, j - 1) - net.angle(i - 1, j + 1) +
                            net.angle(i - 1, j - 1)) /
                           (4.0 * net.h * net.h);
      r.residual = std::fmax(r.residual, std::fabs(cross - std::sin(net.angle(i, j))));
      ++r.points;
    }
  if (r.points == 0) throw PreconditionError("net has no interior point with a full 3x3 neighbourhood");
  return r;
}

/// ω₁²(E₁) + ½ ∂Θ/∂x¹ and ω₁²(E₂) − ½ ∂Θ/∂x², with ω₁² from exact frame
/// derivatives and ∂Θ by centered differences on the net.
inline double conneta_residual(const SurfaceImmersion& s, const NetGrid& net) {
  double worst = 0.0;
  std::size_t used = 0;
  for (int j = 1; j < net.n; ++j)
    for (int i = 1; i < net.n; ++i) {
      if (!net.valid(i, j) || !net.valid(i + 1, j) || !net.valid(i - 1, j) || !net.valid(i, j + 1) ||
          !net.valid(i, j - 1))
        continue;
      const Vec2 p = net.point(i, j);
      const FrameJet fj = frame_jet(s.jet(p, 3), net.reference);
      const AsymptoticFrame af = asymptotic_frame(fj.at);
      const Vec2 w = fj.omega12();
      const double d1 = (net.angle(i + 1, j) - net.angle(i - 1, j)) / (2.0 * net.h);
      const double d2 = (net.angle(i, j + 1) - net.angle(i, j - 1)) / (2.0 * net.h);
      worst = std::fmax(worst, std::fabs(dot(w, af.E1) + 0.5 * d1));
      worst = std::fmax(worst, std::fabs(dot(w, af.E2) - 0.5 * d2));
      ++used;
    }
  if (used == 0) throw PreconditionError("net has no interior point with a full stencil");
  return worst;
}

struct AreaReport {
  double quadrature_area = 0.0;
  double corner_area = 0.0;
  bool bound_2pi = false;
  double relative_difference = 0.0;
};

/// ∬ sin Θ dx¹dx² by composite Simpson, and the four-corner combination
/// Θ(a,a) − Θ(−a,a) − Θ(a,−a) + Θ(−a,−a).
inline AreaReport area_two_ways(const NetGrid& net) {
  AreaReport r;
  if (net.n == 0) {
    r.bound_2pi = true;
    return r;
  }
  for (const auto& p : net.points)
    if (!p) {
      const double b = net.largest_valid_half_width();
      throw PreconditionError("net has missing points; largest fully valid half-width is a = " +
                              (b < 0 ? std::string("none") : std::to_string(b)));
    }
  auto weight = [n = net.n](int k) { return (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0); };
  double sum = 0.0;
  for (int j = 0; j <= net.n; ++j)
    for (int i = 0; i <= net.n; ++i) sum += weight(i) * weight(j) * std::sin(net.angle(i, j));
  r.quadrature_area = sum * (net.h / 3.0) * (net.h / 3.0);
  const int n = net.n;
  r.corner_area = net.angle(n, n) - net.angle(0, n) - net.angle(n, 0) + net.angle(0, 0);
  r.bound_2pi = r.corner_area < 2.0 * std::numbers::pi;
  r.relative_difference = std::fabs(r.quadrature_area - r.corner_area) / std::fabs(r.corner_area);
  return r;
}

// ---------------------------------------------------------------------------

/// Lattice indices sampled deterministically among present points.
inline std::vector<std::pair<int, int>> sample_lattice(const NetGrid& net, std::size_t count, unsigned seed) {
  std::vector<std::pair<int, int>> present;
  for (int j = 0; j <= net.n; ++j)
    for (int i = 0; i <= net.n; ++i)
      if (net.valid(i, j)) present.emplace_back(i, j);
  std::mt19937_64 rng(seed);
  std::shuffle(present.begin(), present.end(), rng);
  if (present.size() > count) present.resize(count);
  std::sort(present.begin(), present.end());
  return present;
}

/// Polyline actually followed from the origin to lattice point (i, j).
inline std::vector<Vec2> net_path(const NetGrid& net, int i, int j) {
  std::vector<Vec2> path{net.origin};
  const int m = net.mid(), q = net.substeps;
  const auto& leg = i >= m ? net.leg_plus : net.leg_minus;
  for (int k = 1; k <= std::abs(i - m) * q; ++k) path.push_back(leg[k]);
  const auto& col = j >= m ? net.column_plus[i] : net.column_minus[i];
  for (int k = 1; k <= std::abs(j - m) * q; ++k) path.push_back(col[k]);
  return path;
}

/// (∫ η¹, ∫ η²) along a polyline, three-point Gauss–Legendre per chord.
inline Vec2 integrate_eta(const SurfaceImmersion& s, const Vec2& reference, const std::vector<Vec2>& path) {
  static const double node[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
  static const double wt[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  Vec2 total{0.0, 0.0};
  for (std::size_t k = 1; k < path.size(); ++k) {
    const Vec2 d = path[k] - path[k - 1];
    for (int q = 0; q < 3; ++q) {
      const AsymptoticFrame af = asymptotic_frame(s, path[k - 1] + node[q] * d, reference);
      total[0] += wt[q] * dot(af.eta1_coords, d);
      total[1] += wt[q] * dot(af.eta2_coords, d);
    }
  }
  return total;
}

struct FInverseReport {
  double residual = 0.0;         // max |F(G(x)) − x| over samples
  double first_leg_drift = 0.0;  // max |F²| along the E₁ leg
};

inline FInverseReport check_F_inverse(const SurfaceImmersion& s, const NetGrid& net,
                                      const std::vector<std::pair<int, int>>& samples) {
  FInverseReport r;
  for (auto [i, j] : samples) {
    if (!net.valid(i, j)) continue;
    const Vec2 f = integrate_eta(s, net.reference, net_path(net, i, j));
    r.residual = std::fmax(r.residual, std::fmax(std::fabs(f[0] - net.x(i)), std::fabs(f[1] - net.x(j))));
  }
  const int m = net.mid();
  for (int i = 0; i <= net.n; ++i) {
    if (!net.valid(i, m)) continue;
    r.first_leg_drift = std::fmax(r.first_leg_drift, std::fabs(integrate_eta(s, net.reference, net_path(net, i, m))[1]));
  }
  return r;
}

/// max |G_{E₂→E₁}(x) − G(x)| over samples whose reversed path stays inside.
inline double flow_commutation_residual(const SurfaceImmersion& s, const NetGrid& net,
                                        const std::vector<std::pair<int, int>>& samples) {
  const VectorField e1 = asymptotic_field(s, 1, net.reference);
  const VectorField e2 = asymptotic_field(s, 2, net.reference);
  const FlowOptions opt{.step = net.h / net.substeps, .validate = false, .record_path = false};
  double worst = 0.0;
  for (auto [i, j] : samples) {
    if (!net.valid(i, j)) continue;
    const FlowResult first = integrate_flow(e2, net.origin, net.x(j), opt);
    if (first.exited) continue;
    const FlowResult second = integrate_flow(e1, first.endpoint, net.x(i), opt);
    if (second.exited) continue;
    worst = std::fmax(worst, norm(second.endpoint - net.point(i, j)));
  }
  return worst;
}

// ---------------------------------------------------------------------------

struct JacobianData {
  Eigen::Matrix2d matrix;
  Vec2 singular_values;  // descending
  double det = 0.0;
};

/// M_α = [[cos α, cos α], [−sin α, sin α]], the matrix of G's differential
/// from the (E₁, E₂) coordinates to the orthonormal principal frame.
inline JacobianData jacobian_data(double alpha) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi / 2)) throw DomainError("alpha must lie in (0, pi/2)");
  JacobianData d;
  const double c = std::cos(alpha), s = std::sin(alpha);
  d.matrix << c, c, -s, s;
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(d.matrix);
  d.singular_values = {svd.singularValues()(0), svd.singularValues()(1)};
  d.det = d.matrix.determinant();
  return d;
}

}  // namespace mframes
