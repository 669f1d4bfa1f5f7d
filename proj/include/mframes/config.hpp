#pragma once

// Run configuration for the command-line tool, read from JSON.

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfaces.hpp"

namespace mframes {

/// Malformed or inconsistent configuration; the message carries the field
/// path and, when it can be found, the line in the source text.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SurfaceConfig {
  std::string name = "pseudosphere";
  double u_cut = 0.2, chart_angle = 0.0, chart_warp = 0.0;  // pseudosphere
  double radius = 1.0;                                      // sphere
  double dini_a = 0.96, dini_b = 0.28;                      // dini
  std::string x, y, z;                                      // custom
  std::map<std::string, double> constants;
  std::optional<ParamRect> domain;
  std::string derivatives = "auto";  // auto | analytic | ad
};

struct GridConfig {
  std::optional<ParamRect> domain;
  std::optional<double> h;
  std::optional<int> n;
};

struct NetConfig {
  Vec2 origin{};
  double a = 0.5;
  int n = 100;
};

struct AreaSweepConfig {
  int trials = 0;
  unsigned seed = 1;
  int n = 16;
};

struct HyperbolicConfig {
  std::vector<double> t{0.3, 0.5, 1.0 / std::numbers::sqrt3, 0.9, 0.99};
  int resolution = 20000;
  int samples = 1000;
  unsigned seed = 7;
  Vec2 picard_start{0.7, 0.2};
};

struct RunConfig {
  SurfaceConfig surface;
  GridConfig grid;
  std::optional<NetConfig> net;
  AreaSweepConfig area;
  HyperbolicConfig hyperbolic;
  std::map<std::string, double> tolerances;
  std::string output = ".";
  std::set<std::string> formats{"csv", "json"};
};

namespace detail {

class ConfigReader {
 public:
  explicit ConfigReader(std::string text) : text_(std::move(text)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    std::string where;
    std::string leaf = path.substr(path.rfind('.') == std::string::npos ? 0 : path.rfind('.') + 1);
    leaf = leaf.substr(0, leaf.find('['));
    const auto pos = text_.find("\"" + leaf + "\"");
    if (pos != std::string::npos) where = "line " + std::to_string(line_of(pos)) + ": ";
    throw ConfigError(where + "field '" + path + "': " + what);
  }

  std::size_t line_of(std::size_t byte) const {
    std::size_t line = 1;
    for (std::size_t k = 0; k < byte && k < text_.size(); ++k)
      if (text_[k] == '\n') ++line;
    return line;
  }

  void only_keys(const nlohmann::json& obj, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) fail(join(path, it.key()), "unknown field");
    }
  }

  double number(const nlohmann::json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
  }

  int integer(const nlohmann::json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
  }

  std::string string(const nlohmann::json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  Vec2 pair(const nlohmann::json& v, const std::string& path) const {
    if (!v.is_array() || v.size() != 2) fail(path, "expected an array of two numbers");
    return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
  }

  ParamRect rect(const nlohmann::json& v, const std::string& path) const {
    only_keys(v, path, {"u", "v"});
    if (!v.contains("u") || !v.contains("v")) fail(path, "expected both 'u' and 'v' ranges");
    const Vec2 u = pair(v["u"], path + ".u"), w = pair(v["v"], path + ".v");
    const ParamRect r{u[0], u[1], w[0], w[1]};
    if (!r.valid()) fail(path, "ranges must be increasing");
    return r;
  }

  static std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

 private:
  std::string text_;
};

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  detail::ConfigReader rd(text);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t line = rd.line_of(e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError("line " + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
  }
  RunConfig c;
  rd.only_keys(j, "", {"surface", "grid", "net", "area", "hyperbolic", "tolerances", "output", "formats"});

  if (j.contains("surface")) {
    const auto& s = j["surface"];
    rd.only_keys(s, "surface",
                 {"name", "u_cut", "chart_angle", "chart_warp", "radius", "a", "b", "x", "y", "z", "constants",
                  "domain", "derivatives"});
    auto& sc = c.surface;
    if (s.contains("name")) sc.name = rd.string(s["name"], "surface.name");
    if (sc.name != "pseudosphere" && sc.name != "sphere" && sc.name != "plane" && sc.name != "dini" &&
        sc.name != "custom")
      rd.fail("surface.name", "unknown surface '" + sc.name + "' (pseudosphere, sphere, plane, dini, custom)");
    if (s.contains("u_cut")) sc.u_cut = rd.number(s["u_cut"], "surface.u_cut");
    if (s.contains("chart_angle")) sc.chart_angle = rd.number(s["chart_angle"], "surface.chart_angle");
    if (s.contains("chart_warp")) sc.chart_warp = rd.number(s["chart_warp"], "surface.chart_warp");
    if (s.contains("radius")) sc.radius = rd.number(s["radius"], "surface.radius");
    if (s.contains("a")) sc.dini_a = rd.number(s["a"], "surface.a");
    if (s.contains("b")) sc.dini_b = rd.number(s["b"], "surface.b");
    for (const char* k : {"x", "y", "z"})
      if (s.contains(k)) (k[0] == 'x' ? sc.x : k[0] == 'y' ? sc.y : sc.z) = rd.string(s[k], std::string("surface.") + k);
    if (s.contains("constants")) {
      if (!s["constants"].is_object()) rd.fail("surface.constants", "expected an object of numbers");
      for (auto it = s["constants"].begin(); it != s["constants"].end(); ++it)
        sc.constants[it.key()] = rd.number(it.value(), "surface.constants." + it.key());
    }
    if (s.contains("domain")) sc.domain = rd.rect(s["domain"], "surface.domain");
    if (s.contains("derivatives")) {
      sc.derivatives = rd.string(s["derivatives"], "surface.derivatives");
      if (sc.derivatives != "auto" && sc.derivatives != "analytic" && sc.derivatives != "ad")
        rd.fail("surface.derivatives", "expected one of auto, analytic, ad");
    }
    if (sc.name == "custom" && (sc.x.empty() || sc.y.empty() || sc.z.empty() || !sc.domain))
      rd.fail("surface", "custom surface needs 'x', 'y', 'z' and 'domain'");
  }

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    rd.only_keys(g, "grid", {"h", "n", "domain"});
    if (g.contains("h")) {
      c.grid.h = rd.number(g["h"], "grid.h");
      if (!(*c.grid.h > 0.0)) rd.fail("grid.h", "must be positive");
    }
    if (g.contains("n")) {
      c.grid.n = rd.integer(g["n"], "grid.n");
      if (*c.grid.n < 4) rd.fail("grid.n", "must be at least 4");
    }
    if (c.grid.h && c.grid.n) rd.fail("grid", "give either 'h' or 'n', not both");
    if (g.contains("domain")) c.grid.domain = rd.rect(g["domain"], "grid.domain");
  }

  if (j.contains("net")) {
    const auto& n = j["net"];
    rd.only_keys(n, "net", {"origin", "a", "n"});
    if (!n.contains("origin")) rd.fail("net.origin", "required");
    NetConfig nc;
    nc.origin = rd.pair(n["origin"], "net.origin");
    if (n.contains("a")) nc.a = rd.number(n["a"], "net.a");
    if (n.contains("n")) nc.n = rd.integer(n["n"], "net.n");
    if (nc.a < 0.0) rd.fail("net.a", "must be non-negative");
    if (nc.n < 4) rd.fail("net.n", "must be at least 4");
    if (nc.n % 2 != 0) rd.fail("net.n", "must be even so that the origin is a lattice point");
    c.net = nc;
  }

  if (j.contains("area")) {
    const auto& a = j["area"];
    rd.only_keys(a, "area", {"trials", "seed", "n"});
    if (a.contains("trials")) c.area.trials = rd.integer(a["trials"], "area.trials");
    if (a.contains("seed")) c.area.seed = static_cast<unsigned>(rd.integer(a["seed"], "area.seed"));
    if (a.contains("n")) c.area.n = rd.integer(a["n"], "area.n");
    if (c.area.trials < 0) rd.fail("area.trials", "must be non-negative");
    if (c.area.n < 4 || c.area.n % 2 != 0) rd.fail("area.n", "must be an even integer >= 4");
  }

  if (j.contains("hyperbolic")) {
    const auto& h = j["hyperbolic"];
    rd.only_keys(h, "hyperbolic", {"t", "resolution", "samples", "seed", "picard_start"});
    auto& hc = c.hyperbolic;
    if (h.contains("t")) {
      if (!h["t"].is_array() || h["t"].empty()) rd.fail("hyperbolic.t", "expected a non-empty array of radii");
      hc.t.clear();
      for (std::size_t k = 0; k < h["t"].size(); ++k) {
        const double t = rd.number(h["t"][k], "hyperbolic.t[" + std::to_string(k) + "]");
        if (!(t > 0.0 && t < 1.0)) rd.fail("hyperbolic.t", "radii must lie in (0, 1)");
        hc.t.push_back(t);
      }
    }
    if (h.contains("resolution")) hc.resolution = rd.integer(h["resolution"], "hyperbolic.resolution");
    if (h.contains("samples")) hc.samples = rd.integer(h["samples"], "hyperbolic.samples");
    if (h.contains("seed")) hc.seed = static_cast<unsigned>(rd.integer(h["seed"], "hyperbolic.seed"));
    if (h.contains("picard_start")) hc.picard_start = rd.pair(h["picard_start"], "hyperbolic.picard_start");
    if (hc.resolution < 2) rd.fail("hyperbolic.resolution", "must be at least 2");
    if (hc.samples < 1) rd.fail("hyperbolic.samples", "must be positive");
    if (!(dot(hc.picard_start, hc.picard_start) < 1.0)) rd.fail("hyperbolic.picard_start", "must lie in the unit disk");
  }

  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) rd.fail("tolerances", "expected an object mapping check names to thresholds");
    for (auto it = t.begin(); it != t.end(); ++it) {
      const double v = rd.number(it.value(), "tolerances." + it.key());
      if (v < 0.0) rd.fail("tolerances." + it.key(), "must be non-negative");
      c.tolerances[it.key()] = v;
    }
  }

  if (j.contains("output")) c.output = rd.string(j["output"], "output");
  if (j.contains("formats")) {
    if (!j["formats"].is_array()) rd.fail("formats", "expected an array of \"csv\" / \"json\"");
    c.formats.clear();
    for (const auto& f : j["formats"]) {
      const std::string s = rd.string(f, "formats");
      if (s != "csv" && s != "json") rd.fail("formats", "unknown format '" + s + "'");
      c.formats.insert(s);
    }
  }
  return c;
}

/// Surface described by the configuration, with its derivative policy applied.
inline SurfaceImmersion make_surface(const SurfaceConfig& sc) {
  SurfaceImmersion s;
  try {
    if (sc.name == "pseudosphere")
      s = pseudosphere({.u_cut = sc.u_cut, .chart_angle = sc.chart_angle, .chart_warp = sc.chart_warp, .domain = sc.domain});
    else if (sc.name == "sphere")
      s = sphere(sc.radius, sc.domain);
    else if (sc.name == "plane")
      s = plane(sc.domain);
    else if (sc.name == "dini")
      s = dini_surface(sc.dini_a, sc.dini_b, sc.domain);
    else
      s = custom_surface(sc.x, sc.y, sc.z, *sc.domain, sc.constants);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("surface: ") + e.what());
  } catch (const ExpressionError& e) {
    throw ConfigError(std::string("surface: ") + e.what());
  }
  if (sc.derivatives == "analytic" && !s.has_analytic())
    throw ConfigError("surface.derivatives: '" + sc.name + "' has no analytic partials for these parameters");
  if (sc.derivatives == "ad") s = s.without_analytic();
  return s;
}

}  // namespace mframes
