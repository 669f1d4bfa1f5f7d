#pragma once

// Subcommands of the mframes tool. Each returns the process exit code:
// 0 all checks pass, 1 a check failed, 2 usage, configuration or
// precondition error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "config.hpp"
#include "frame_checks.hpp"
#include "hyperbolic.hpp"
#include "net.hpp"
#include "picard.hpp"
#include "report.hpp"

namespace mframes::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsageError = 2 };

inline constexpr double kRateLow = 3.0, kRateHigh = 5.0;
/// Residuals below this are at roundoff and exempt from the rate requirement.
inline constexpr double kRateFloor = 1e-10;

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"surface-info", "verify", "net", "area", "hyperbolic"};
  return names;
}

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::set<std::string>> formats;
  bool quiet = false;
};

inline const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"surface.curvature", 1e-8},
      {"surface.ad_agreement", 1e-10},
      {"surface.dilation", 1e-8},
      {"structure.dtheta1", 1e-5},
      {"structure.dtheta2", 1e-5},
      {"structure.domega12", 1e-5},
      {"structure.domega13", 1e-5},
      {"structure.domega23", 1e-5},
      {"normal_connection.princurv", 1e-5},
      {"lemma.connprin", 1e-5},
      {"connection.exact", 1e-5},
      {"connection.antisymmetry", 1e-10},
      {"gauss.domega12", 1e-5},
      {"lemma.conntancot", 1e-5},
      {"lemma.dk1", 1e-8},
      {"lemma.dk2", 1e-8},
      {"lemma.closed.eta1", 1e-5},
      {"lemma.closed.eta2", 1e-5},
      {"lemma.etasec", 1e-5},
      {"lemma.etacosec", 1e-5},
      {"net.sine_gordon", 1e-3},
      {"net.conneta", 1e-3},
      {"net.area", 1e-4},
      {"net.area_bound", 2.0 * std::numbers::pi},
      {"net.area_bound_sweep", 2.0 * std::numbers::pi},
      {"net.commutation", 1e-6},
      {"net.F_inverse", 1e-6},
      {"net.first_leg", 1e-8},
      {"net.jacobian_svd", 1e-12},
      {"hyperbolic.disk_area", 1e-6},
      {"hyperbolic.disk_area_2pi", 1e-6},
      {"hyperbolic.disk_area_divergence", 900.0},
      {"hyperbolic.mobius_distance", 1e-12},
      {"hyperbolic.mobius_norm", 1e-12},
      {"hyperbolic.picard", 1e-6},
      {"hyperbolic.picard_speed", 0.5 + 1e-10},
  };
  return t;
}

inline void validate_tolerance_names(const RunConfig& c) {
  for (const auto& [name, value] : c.tolerances)
    if (!default_tolerances().count(name)) throw ConfigError("field 'tolerances." + name + "': unknown check name");
}

inline double tolerance_for(const RunConfig& c, const std::string& check) {
  auto it = c.tolerances.find(check);
  return it != c.tolerances.end() ? it->second : default_tolerances().at(check);
}

struct Level {
  double h = 0.0;
  double residual = 0.0;
};

struct CheckEntry {
  std::string check, identity;
  std::string comparison = "<";  // "<", "<=" or ">"
  double tolerance = 0.0;
  double h = std::numeric_limits<double>::quiet_NaN();
  double residual = 0.0;
  std::vector<Level> levels;  // coarse to fine when a rate is measured
  std::optional<double> rate;
  bool rate_required = false;
  bool extra_ok = true;  // additional condition recorded in `detail`
  bool pass = false;
  Json detail;
};

inline void finalize(CheckEntry& e) {
  bool ok = e.comparison == "<"    ? e.residual < e.tolerance
            : e.comparison == "<=" ? e.residual <= e.tolerance
                                   : e.residual > e.tolerance;
  if (e.levels.size() == 2) {
    if (e.levels[1].residual > 0.0) e.rate = e.levels[0].residual / e.levels[1].residual;
    if (e.rate_required && !(e.levels[1].residual < kRateFloor))
      ok = ok && e.rate && *e.rate >= kRateLow && *e.rate <= kRateHigh;
  }
  e.pass = ok && e.extra_ok && std::isfinite(e.residual);
}

inline CheckEntry make_entry(const RunConfig& c, std::string check, std::string identity, double residual,
                             double h = std::numeric_limits<double>::quiet_NaN()) {
  CheckEntry e;
  e.tolerance = tolerance_for(c, check);
  e.check = std::move(check);
  e.identity = std::move(identity);
  e.residual = residual;
  e.h = h;
  if (e.check == "hyperbolic.disk_area_divergence") e.comparison = ">";
  if (e.check == "hyperbolic.picard_speed") e.comparison = "<=";
  return e;
}

inline Json to_json(const CheckEntry& e) {
  Json j;
  j["check"] = e.check;
  j["identity"] = e.identity;
  j["h"] = json_number(e.h);
  j["residual"] = json_number(e.residual);
  j["rate"] = json_number(e.rate);
  j["comparison"] = e.comparison;
  j["tolerance"] = e.tolerance;
  j["pass"] = e.pass;
  if (!e.levels.empty()) {
    Json lv = Json::array();
    for (const auto& l : e.levels) lv.push_back(Json{{"h", l.h}, {"residual", json_number(l.residual)}});
    j["levels"] = lv;
    j["rate_required"] = e.rate_required;
  }
  if (!e.detail.is_null()) j["detail"] = e.detail;
  return j;
}

inline std::string describe(const CheckEntry& e) {
  std::string s = (e.pass ? "PASS " : "FAIL ") + e.check;
  s.resize(std::max<std::size_t>(s.size(), 36), ' ');
  s += " residual=" + format_double(e.residual, 4);
  if (e.rate) s += " rate=" + format_double(*e.rate, 4);
  s += " (" + e.comparison + " " + format_double(e.tolerance, 4) + ")";
  return s;
}

// ---------------------------------------------------------------------------

struct Context {
  RunConfig config;
  std::string out_dir;
  std::set<std::string> formats;
  bool quiet = false;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  void say(const std::string& line) const {
    if (!quiet) *out << line << '\n';
  }
  void warn(const std::string& line) const { *err << line << '\n'; }
  bool json() const { return formats.count("json") > 0; }
  bool csv() const { return formats.count("csv") > 0; }

  void write(const std::string& name, const std::string& text) const {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const auto path = std::filesystem::path(out_dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("failed writing " + path.string());
    say("wrote " + path.string());
  }
};

inline Json config_echo(const RunConfig& c, const SurfaceImmersion& s) {
  Json j;
  j["name"] = c.surface.name;
  if (c.surface.name == "pseudosphere") {
    j["u_cut"] = c.surface.u_cut;
    j["chart_angle"] = c.surface.chart_angle;
    j["chart_warp"] = c.surface.chart_warp;
  } else if (c.surface.name == "sphere") {
    j["radius"] = c.surface.radius;
  } else if (c.surface.name == "dini") {
    j["a"] = c.surface.dini_a;
    j["b"] = c.surface.dini_b;
  } else if (c.surface.name == "custom") {
    j["x"] = c.surface.x;
    j["y"] = c.surface.y;
    j["z"] = c.surface.z;
  }
  const ParamRect& d = s.domain();
  j["domain"] = Json{{"u", {d.u_min, d.u_max}}, {"v", {d.v_min, d.v_max}}};
  j["derivatives"] = s.has_analytic() ? "analytic" : "ad";
  return j;
}

inline Json rect_json(const ParamRect& r) { return Json{{"u", {r.u_min, r.u_max}}, {"v", {r.v_min, r.v_max}}}; }

inline ParamRect requested_domain(const RunConfig& c, const SurfaceImmersion& s, bool small_default) {
  ParamRect r = s.domain();
  if (c.grid.domain) {
    r = *c.grid.domain;
    if (!s.domain().contains(r))
      throw ConfigError("field 'grid.domain': rectangle leaves the surface domain u in [" +
                        format_double(s.domain().u_min, 6) + ", " + format_double(s.domain().u_max, 6) + "], v in [" +
                        format_double(s.domain().v_min, 6) + ", " + format_double(s.domain().v_max, 6) + "]");
  } else if (small_default) {
    // 0.2 x 0.2 square at the centre of the surface domain.
    const double uc = 0.5 * (r.u_min + r.u_max), vc = 0.5 * (r.v_min + r.v_max);
    r = {uc - 0.1, uc + 0.1, vc - 0.1, vc + 0.1};
  }
  return r;
}

inline void validate_net_config(const RunConfig& c, const SurfaceImmersion& s) {
  if (c.net && !s.domain().contains(c.net->origin))
    throw ConfigError("field 'net.origin': point lies outside the surface domain");
}

/// Rejects surfaces that are not K = −1 on the sampled rectangle.
inline void require_unit_negative_curvature(const SurfaceImmersion& s, const ParamRect& r) {
  for (double fu : {0.0, 0.5, 1.0})
    for (double fv : {0.0, 0.5, 1.0}) {
      const Vec2 p{r.u_min + fu * (r.u_max - r.u_min), r.v_min + fv * (r.v_max - r.v_min)};
      const double K = gaussian_curvature(s, p);
      if (!(std::fabs(K + 1.0) < kUnitCurvatureTolerance))
        throw PreconditionError("verify runs checks that require Gaussian curvature -1, but surface '" +
                                s.name() + "' has K = " + format_double(K, 10) + " at (" + format_double(p[0], 6) +
                                ", " + format_double(p[1], 6) + ")");
    }
}

// ---------------------------------------------------------------------------
// Check groups.

inline std::vector<CheckEntry> surface_checks(const RunConfig& c, const SurfaceImmersion& s, const Grid& g) {
  double curv = 0.0, agree = 0.0, dil = 0.0;
  const SurfaceImmersion ad = s.without_analytic();
  std::vector<SurfaceImmersion> scaled;
  const double factors[3] = {0.5, 2.0, 10.0};
  for (double k : factors) scaled.push_back(dilate(s, k));
  g.for_each([&](int i, int j) {
    const Vec2 p = g.point(i, j);
    curv = std::fmax(curv, std::fabs(gaussian_curvature(s, p) + 1.0));
    if (s.has_analytic()) {
      const auto a = shape_eigenvalues(s, p), b = shape_eigenvalues(ad, p);
      agree = std::fmax(agree, std::fmax(std::fabs(a.first - b.first), std::fabs(a.second - b.second)));
    }
    if ((i % 10 == 0) && (j % 10 == 0)) {
      const auto base = shape_eigenvalues(s, p);
      for (int q = 0; q < 3; ++q) {
        const auto e = shape_eigenvalues(scaled[q], p);
        dil = std::fmax(dil, std::fabs(e.first * factors[q] - base.first) / std::fabs(base.first));
        dil = std::fmax(dil, std::fabs(e.second * factors[q] - base.second) / std::fabs(base.second));
      }
    }
  });
  std::vector<CheckEntry> out;
  out.push_back(make_entry(c, "surface.curvature", "K = kappa1 kappa2 = -1", curv));
  if (s.has_analytic())
    out.push_back(make_entry(c, "surface.ad_agreement", "analytic and AD principal curvatures agree", agree));
  out.push_back(make_entry(c, "surface.dilation", "dilation by k divides principal curvatures by k", dil));
  for (auto& e : out) finalize(e);
  return out;
}

inline std::vector<CheckEntry> frame_checks(const RunConfig& c, const SurfaceImmersion& s, const ParamRect& rect,
                                            double h) {
  std::vector<CheckEntry> out;
  for (const auto& ce : frame_convergence(s, rect, h, true)) {
    CheckEntry e = make_entry(c, ce.check, ce.identity, ce.fine, ce.h_fine);
    const bool exact = ce.check == "lemma.dk1" || ce.check == "lemma.dk2" || ce.check == "connection.antisymmetry";
    e.levels = {{ce.h_coarse, ce.coarse}, {ce.h_fine, ce.fine}};
    e.rate_required = !exact;
    finalize(e);
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<CheckEntry> net_checks(const RunConfig& c, const SurfaceImmersion& s, const NetConfig& nc) {
  std::vector<CheckEntry> out;
  if (nc.a == 0.0) return out;
  const NetGrid coarse = build_net(s, nc.origin, nc.a, nc.n);
  const NetGrid fine = build_net(s, nc.origin, nc.a, 2 * nc.n);

  const double sg_c = sine_gordon_residual(coarse).residual, sg_f = sine_gordon_residual(fine).residual;
  CheckEntry sg = make_entry(c, "net.sine_gordon", "d2 Theta / dx1 dx2 = sin Theta", sg_c, coarse.h);
  sg.levels = {{coarse.h, sg_c}, {fine.h, sg_f}};
  sg.rate_required = true;
  out.push_back(sg);

  const double cn_c = conneta_residual(s, coarse), cn_f = conneta_residual(s, fine);
  CheckEntry cn = make_entry(c, "net.conneta", "omega12 = -1/2 dTheta/dx1 eta1 + 1/2 dTheta/dx2 eta2", cn_c, coarse.h);
  cn.levels = {{coarse.h, cn_c}, {fine.h, cn_f}};
  cn.rate_required = true;
  out.push_back(cn);

  const AreaReport ar = area_two_ways(coarse);
  CheckEntry area = make_entry(c, "net.area", "integral of sin Theta = corner combination of Theta",
                               ar.relative_difference, coarse.h);
  area.detail = Json{{"quadrature_area", ar.quadrature_area}, {"corner_area", ar.corner_area}};
  out.push_back(area);
  out.push_back(make_entry(c, "net.area_bound", "corner combination of Theta < 2 pi", ar.corner_area, coarse.h));

  const auto samples = sample_lattice(coarse, 50, 2024);
  out.push_back(make_entry(c, "net.commutation", "flowing E2 then E1 reaches G(x)",
                           flow_commutation_residual(s, coarse, samples), coarse.h));
  const FInverseReport fi = check_F_inverse(s, coarse, samples);
  out.push_back(make_entry(c, "net.F_inverse", "F(G(x)) = x with F = integrals of (eta1, eta2)", fi.residual, coarse.h));
  out.push_back(make_entry(c, "net.first_leg", "eta2 integrates to 0 along the E1 leg", fi.first_leg_drift, coarse.h));
  for (auto& e : out) finalize(e);
  return out;
}

inline CheckEntry jacobian_check(const RunConfig& c) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(1e-3, std::numbers::pi / 2 - 1e-3);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double a = angle(rng);
    const JacobianData d = jacobian_data(a);
    const double hi = std::numbers::sqrt2 * std::fmax(std::cos(a), std::sin(a));
    const double lo = std::numbers::sqrt2 * std::fmin(std::cos(a), std::sin(a));
    worst = std::fmax(worst, std::fmax(std::fabs(d.singular_values[0] - hi), std::fabs(d.singular_values[1] - lo)));
  }
  CheckEntry e = make_entry(c, "net.jacobian_svd", "singular values of M_alpha are sqrt2 cos alpha, sqrt2 sin alpha", worst);
  finalize(e);
  return e;
}

struct HyperbolicData {
  std::vector<CheckEntry> checks;
  Json table = Json::array();
  Json picard = Json::array();
};

inline HyperbolicData hyperbolic_checks(const RunConfig& c) {
  const auto& hc = c.hyperbolic;
  HyperbolicData out;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  auto row = [&](double t) {
    const double q = disk_area(t, hc.resolution), exact = disk_area_closed_form(t);
    out.table.push_back(Json{{"t", t},
                             {"quadrature", q},
                             {"closed_form", exact},
                             {"relative_error", std::fabs(q - exact) / exact},
                             {"ratio_to_2pi", q / kTwoPi}});
    return std::pair{q, std::fabs(q - exact) / exact};
  };
  double worst = 0.0;
  for (double t : hc.t) worst = std::fmax(worst, row(t).second);
  const double t_eq = 1.0 / std::numbers::sqrt3;
  const double a_eq = disk_area(t_eq, hc.resolution);
  const double a_big = row(0.999).first;

  out.checks.push_back(make_entry(c, "hyperbolic.disk_area", "quadrature of 4r/(1-r^2)^2 = 2 pi (2/(1-t^2) - 2)", worst));
  out.checks.push_back(
      make_entry(c, "hyperbolic.disk_area_2pi", "area at t = 1/sqrt3 equals 2 pi", std::fabs(a_eq - kTwoPi) / kTwoPi));
  out.checks.push_back(
      make_entry(c, "hyperbolic.disk_area_divergence", "area at t = 0.999 over 2 pi", a_big / kTwoPi));

  const InvarianceResiduals inv = mobius_invariance(hc.samples, hc.seed);
  out.checks.push_back(make_entry(c, "hyperbolic.mobius_distance", "d(mP, mQ) = d(P, Q)", inv.distance));
  out.checks.push_back(make_entry(c, "hyperbolic.mobius_norm", "|m_* v| = |v|", inv.norm));

  double residual = 0.0, speed = 0.0;
  bool certified = true;
  for (const auto& [name, field] : sample_unit_fields()) {
    const PicardResult r = picard_existence_demo(field);
    residual = std::fmax(residual, r.residual);
    speed = std::fmax(speed, r.max_speed);
    certified = certified && r.certified;
    out.picard.push_back(Json{{"field", name},
                              {"epsilon", r.epsilon},
                              {"iterations", r.iterations},
                              {"lipschitz_estimate", r.lipschitz_estimate},
                              {"max_contraction_ratio", r.max_contraction_ratio},
                              {"max_speed", r.max_speed},
                              {"max_radius", r.max_radius},
                              {"residual", r.residual},
                              {"rk4_difference", r.rk4_difference},
                              {"certified", r.certified}});
  }
  const auto fields = sample_unit_fields();
  const RecenteredPicard rp =
      picard_recentered(fields[2].second, DiskPoint(hc.picard_start[0], hc.picard_start[1]));
  residual = std::fmax(residual, rp.at_origin.residual);
  certified = certified && rp.at_origin.certified;
  out.picard.push_back(Json{{"field", fields[2].first + " recentered"},
                            {"start", {hc.picard_start[0], hc.picard_start[1]}},
                            {"residual", rp.at_origin.residual},
                            {"hyperbolic_speed_error", rp.hyperbolic_speed_error},
                            {"certified", rp.at_origin.certified}});

  CheckEntry pic = make_entry(c, "hyperbolic.picard", "Picard iterate solves y(t) = integral of E(y) on (-1, 1)", residual);
  pic.extra_ok = certified;
  pic.detail = Json{{"all_certified", certified}};
  out.checks.push_back(pic);
  out.checks.push_back(make_entry(c, "hyperbolic.picard_speed", "Euclidean speed of iterates <= 1/2", speed));
  for (auto& e : out.checks) finalize(e);
  return out;
}

// ---------------------------------------------------------------------------
// Commands.

struct Stats {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t count = 0;

  void add(double x) {
    min = std::fmin(min, x);
    max = std::fmax(max, x);
    sum += x;
    ++count;
  }
  Json json() const {
    if (count == 0) return nullptr;
    return Json{{"min", min}, {"max", max}, {"mean", sum / static_cast<double>(count)}};
  }
  std::string text() const {
    if (count == 0) return "n/a";
    return "min " + format_double(min, 10) + "  max " + format_double(max, 10) + "  mean " +
           format_double(sum / static_cast<double>(count), 10);
  }
};

inline int cmd_surface_info(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const SurfaceImmersion s = make_surface(c.surface);
  const ParamRect rect = requested_domain(c, s, false);
  Grid g;
  try {
    g = c.grid.h ? Grid::over(rect, *c.grid.h) : Grid::with_counts(rect, c.grid.n.value_or(40), c.grid.n.value_or(40));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("field 'grid': ") + e.what());
  }

  Stats K, k1, k2, alpha;
  double margin = std::numeric_limits<double>::infinity();
  std::size_t not_immersed = 0, not_hyperbolic = 0;
  g.for_each([&](int i, int j) {
    const Vec2 p = g.point(i, j);
    const Jet3 jet = s.jet(p, 2);
    margin = std::fmin(margin, norm(cross(jet.u, jet.v)));
    try {
      const double k = gaussian_curvature(s, p);
      K.add(k);
      if (k < 0.0) {
        const ShapeSpectrum sp = principal_data(s, p);
        k1.add(sp.kappa1);
        k2.add(sp.kappa2);
        alpha.add(sp.alpha);
      } else {
        ++not_hyperbolic;
        const auto e = shape_eigenvalues(s, p);
        k1.add(e.first);
        k2.add(e.second);
      }
    } catch (const ImmersionError&) {
      ++not_immersed;
    }
  });

  Json notices = Json::array();
  if (not_hyperbolic > 0)
    notices.push_back("not hyperbolic: K >= 0 at " + std::to_string(not_hyperbolic) + " of " +
                      std::to_string(g.size()) + " nodes; asymptotic directions and alpha are undefined there");
  if (not_immersed > 0)
    notices.push_back("not an immersion at " + std::to_string(not_immersed) + " nodes");

  ctx.say("surface " + s.name() + " on u in [" + format_double(rect.u_min, 8) + ", " + format_double(rect.u_max, 8) +
          "], v in [" + format_double(rect.v_min, 8) + ", " + format_double(rect.v_max, 8) + "], " +
          std::to_string(g.nu + 1) + " x " + std::to_string(g.nv + 1) + " nodes");
  ctx.say("  K       " + K.text());
  ctx.say("  kappa1  " + k1.text());
  ctx.say("  kappa2  " + k2.text());
  ctx.say("  alpha   " + alpha.text());
  ctx.say("  immersion margin min |phi_u x phi_v| = " + format_double(margin, 10));
  for (const auto& n : notices) ctx.say("notice: " + n.get<std::string>());

  if (ctx.json()) {
    Json r;
    r["command"] = "surface-info";
    r["surface"] = config_echo(c, s);
    r["grid"] = Json{{"domain", rect_json(rect)}, {"nu", g.nu}, {"nv", g.nv}};
    r["K"] = K.json();
    r["kappa1"] = k1.json();
    r["kappa2"] = k2.json();
    r["alpha"] = alpha.json();
    r["immersion_margin"] = json_number(margin);
    r["notices"] = notices;
    ctx.write("report.json", to_json_text(r));
  }
  return kPass;
}

inline int summarize(const Context& ctx, const std::vector<CheckEntry>& checks, Json& report) {
  Json arr = Json::array();
  Json failed = Json::array();
  for (const auto& e : checks) {
    arr.push_back(to_json(e));
    ctx.say(describe(e));
    if (!e.pass) failed.push_back(e.check);
  }
  report["checks"] = arr;
  report["summary"] = Json{{"total", checks.size()}, {"passed", checks.size() - failed.size()}, {"failed", failed}};
  ctx.say(std::to_string(checks.size() - failed.size()) + "/" + std::to_string(checks.size()) + " checks passed");
  return failed.empty() ? kPass : kCheckFailed;
}

inline int cmd_verify(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const SurfaceImmersion s = make_surface(c.surface);
  validate_net_config(c, s);
  const ParamRect rect = requested_domain(c, s, true);
  const double h = c.grid.n ? (rect.u_max - rect.u_min) / *c.grid.n : c.grid.h.value_or(1e-3);
  Grid fine, coarse;
  try {
    fine = Grid::over(rect, h);
    coarse = Grid::over(rect, 2.0 * h);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("field 'grid': ") + e.what() + " (levels h and 2h are both used)");
  }
  require_unit_negative_curvature(s, rect);

  // Independent groups run concurrently; results are collected in a fixed order.
  auto surf = std::async(std::launch::async, [&] { return surface_checks(c, s, coarse); });
  auto frames = std::async(std::launch::async, [&] { return frame_checks(c, s, rect, h); });
  auto net = std::async(std::launch::async, [&] {
    auto v = c.net ? net_checks(c, s, *c.net) : std::vector<CheckEntry>{};
    v.push_back(jacobian_check(c));
    return v;
  });
  auto hyp = std::async(std::launch::async, [&] { return hyperbolic_checks(c); });

  std::vector<CheckEntry> checks = surf.get();
  for (auto* group : {&frames, &net})
    for (auto& e : group->get()) checks.push_back(std::move(e));
  for (auto& e : hyp.get().checks) checks.push_back(std::move(e));
  if (!c.net) ctx.say("notice: no 'net' section; net checks skipped");

  Json r;
  r["command"] = "verify";
  r["surface"] = config_echo(c, s);
  r["grid"] = Json{{"domain", rect_json(rect)}, {"h", h}, {"h_coarse", 2.0 * h}};
  if (c.net)
    r["net"] = Json{{"origin", {c.net->origin[0], c.net->origin[1]}}, {"a", c.net->a}, {"n", c.net->n}, {"n_fine", 2 * c.net->n}};
  r["rate_rule"] = Json{{"low", kRateLow}, {"high", kRateHigh}, {"floor", kRateFloor}};
  const int code = summarize(ctx, checks, r);
  r["exit_code"] = code;
  if (ctx.json()) ctx.write("report.json", to_json_text(r));
  return code;
}

inline std::string net_csv(const SurfaceImmersion& s, const NetGrid& net) {
  (void)s;
  std::string out = "i,j,x1,x2,u,v,theta,valid\n";
  for (int j = 0; j <= net.n; ++j)
    for (int i = 0; i <= net.n; ++i) {
      const bool ok = net.valid(i, j);
      out += std::to_string(i) + "," + std::to_string(j) + "," + csv_number(net.x(i)) + "," + csv_number(net.x(j)) +
             "," + (ok ? csv_number(net.point(i, j)[0]) : "") + "," + (ok ? csv_number(net.point(i, j)[1]) : "") +
             "," + (ok ? csv_number(net.angle(i, j)) : "") + "," + (ok ? "1" : "0") + "\n";
    }
  return out;
}

inline int cmd_net(const Context& ctx) {
  const RunConfig& c = ctx.config;
  if (!c.net) throw ConfigError("field 'net': required by the net command");
  const SurfaceImmersion s = make_surface(c.surface);
  validate_net_config(c, s);
  NetGrid net;
  try {
    net = build_net(s, c.net->origin, c.net->a, c.net->n);
  } catch (const PreconditionError& e) {
    ctx.warn(std::string("net is empty: ") + e.what() + "; largest valid a is 0 at this origin");
    return kCheckFailed;
  }
  const double best = net.n == 0 ? 0.0 : net.largest_valid_half_width();
  Stats theta;
  for (double t : net.theta)
    if (std::isfinite(t)) theta.add(t);
  Json summary;
  summary["command"] = "net";
  summary["surface"] = config_echo(c, s);
  summary["origin"] = {net.origin[0], net.origin[1]};
  summary["a"] = net.a;
  summary["n"] = net.n;
  summary["h"] = net.h;
  summary["reference_direction"] = {net.reference[0], net.reference[1]};
  summary["points"] = net.points.size();
  summary["valid_points"] = net.valid_count();
  summary["largest_valid_half_width"] = best;
  summary["flow_error_estimate"] = net.flow_error_estimate;
  summary["theta"] = theta.json();
  if (net.n > 0) {
    try {
      summary["sine_gordon_residual"] = sine_gordon_residual(net).residual;
    } catch (const PreconditionError&) {
      summary["sine_gordon_residual"] = nullptr;
    }
  }
  ctx.say("net " + std::to_string(net.valid_count()) + "/" + std::to_string(net.points.size()) +
          " points valid, theta " + theta.text());
  if (net.valid_count() < net.points.size())
    ctx.say("notice: some flows leave the patch; largest fully valid half-width a = " + format_double(best, 10));
  if (ctx.csv()) ctx.write("net.csv", net_csv(s, net));
  if (ctx.json()) ctx.write("net_summary.json", to_json_text(summary));
  return kPass;
}

inline int cmd_area(const Context& ctx) {
  const RunConfig& c = ctx.config;
  if (!c.net) throw ConfigError("field 'net': required by the area command");
  const SurfaceImmersion s = make_surface(c.surface);
  validate_net_config(c, s);
  NetGrid net;
  try {
    net = build_net(s, c.net->origin, c.net->a, c.net->n);
  } catch (const PreconditionError& e) {
    ctx.warn(std::string("net is empty: ") + e.what() + "; largest valid a is 0 at this origin");
    return kCheckFailed;
  }
  AreaReport ar;
  try {
    ar = area_two_ways(net);
  } catch (const PreconditionError& e) {
    ctx.warn(std::string("area needs a complete net: ") + e.what());
    return kCheckFailed;
  }
  std::vector<CheckEntry> checks;
  CheckEntry rel = make_entry(c, "net.area", "integral of sin Theta = corner combination of Theta",
                              ar.relative_difference, net.h);
  rel.detail = Json{{"quadrature_area", ar.quadrature_area}, {"corner_area", ar.corner_area}};
  checks.push_back(rel);
  checks.push_back(make_entry(c, "net.area_bound", "corner combination of Theta < 2 pi", ar.corner_area, net.h));

  // Random origins and half-widths inside the surface domain.
  Json sweep = Json::array();
  if (c.area.trials > 0) {
    std::mt19937_64 rng(c.area.seed);
    const ParamRect& d = s.domain();
    std::uniform_real_distribution<double> du(d.u_min, d.u_max), dv(d.v_min, d.v_max), da(0.05, 1.0);
    double worst = -std::numeric_limits<double>::infinity();
    int valid = 0;
    for (int k = 0; k < c.area.trials; ++k) {
      const Vec2 o{du(rng), dv(rng)};
      const double a = da(rng);
      Json t{{"origin", {o[0], o[1]}}, {"a", a}};
      try {
        const NetGrid g = build_net(s, o, a, c.area.n);
        const AreaReport r = area_two_ways(g);
        t["corner_area"] = r.corner_area;
        worst = std::fmax(worst, r.corner_area);
        ++valid;
      } catch (const PreconditionError&) {
        t["corner_area"] = nullptr;  // flows leave the patch
      }
      sweep.push_back(t);
    }
    CheckEntry e = make_entry(c, "net.area_bound_sweep", "corner combination of Theta < 2 pi over random nets",
                              valid > 0 ? worst : 0.0);
    e.detail = Json{{"trials", c.area.trials}, {"valid", valid}};
    checks.push_back(e);
  }
  for (auto& e : checks) finalize(e);

  Json r;
  r["command"] = "area";
  r["surface"] = config_echo(c, s);
  r["net"] = Json{{"origin", {net.origin[0], net.origin[1]}}, {"a", net.a}, {"n", net.n}};
  r["quadrature_area"] = ar.quadrature_area;
  r["corner_area"] = ar.corner_area;
  r["relative_difference"] = ar.relative_difference;
  r["bound_2pi"] = ar.bound_2pi;
  if (!sweep.empty()) r["sweep"] = sweep;
  const int code = summarize(ctx, checks, r);
  r["exit_code"] = code;
  if (ctx.json()) ctx.write("report.json", to_json_text(r));
  return code;
}

inline int cmd_hyperbolic(const Context& ctx) {
  const HyperbolicData d = hyperbolic_checks(ctx.config);
  ctx.say("        t     quadrature    closed form   relative error   area/2pi");
  for (const auto& row : d.table) {
    char line[160];
    std::snprintf(line, sizeof line, "%9.6f %14.7f %14.7f %16.3e %10.4f", row["t"].get<double>(),
                  row["quadrature"].get<double>(), row["closed_form"].get<double>(),
                  row["relative_error"].get<double>(), row["ratio_to_2pi"].get<double>());
    ctx.say(line);
  }
  Json r;
  r["command"] = "hyperbolic";
  r["disk_area"] = d.table;
  r["picard"] = d.picard;
  const int code = summarize(ctx, d.checks, r);
  r["exit_code"] = code;
  if (ctx.json()) ctx.write("hyperbolic.json", to_json_text(r));
  return code;
}

/// Run `command` with a parsed configuration. Errors are reported on `err`.
inline int run(const std::string& command, const RunConfig& config, const Overrides& ov, std::ostream& out,
               std::ostream& err) {
  Context ctx;
  ctx.config = config;
  ctx.out_dir = ov.out.value_or(config.output);
  ctx.formats = ov.formats.value_or(config.formats);
  ctx.quiet = ov.quiet;
  ctx.out = &out;
  ctx.err = &err;
  try {
    validate_tolerance_names(config);
    if (command == "surface-info") return cmd_surface_info(ctx);
    if (command == "verify") return cmd_verify(ctx);
    if (command == "net") return cmd_net(ctx);
    if (command == "area") return cmd_area(ctx);
    if (command == "hyperbolic") return cmd_hyperbolic(ctx);
    err << "error: unknown command '" << command << "'\n";
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
  } catch (const NotHyperbolicError& e) {
    err << "precondition failed: surface is not hyperbolic: " << e.what() << '\n';
  } catch (const ImmersionError& e) {
    err << "precondition failed: " << e.what() << '\n';
  } catch (const ResolutionError& e) {
    err << "resolution error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kUsageError;
}

/// Parse the configuration text and run; a parse failure yields exit code 2.
inline int run_text(const std::string& command, const std::string& config_text, const Overrides& ov, std::ostream& out,
                    std::ostream& err) {
  RunConfig c;
  try {
    c = parse_config(config_text);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  }
  return run(command, c, ov, out, err);
}

}  // namespace mframes::cli
