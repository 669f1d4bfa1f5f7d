#pragma once

// Serialization for the command-line reports: JSON with 17 significant
// digits, CSV with 12. Non-finite doubles become null / empty cells.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace mframes {

using Json = nlohmann::ordered_json;

inline std::string format_double(double x, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

inline std::string csv_number(double x) { return std::isfinite(x) ? format_double(x, 12) : std::string(); }

inline Json json_number(std::optional<double> x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

namespace detail {

inline void indent_to(std::ostream& os, int level) {
  os << '\n';
  for (int k = 0; k < level; ++k) os << "  ";
}

}  // namespace detail

/// Pretty-print with two-space indentation and round-trip doubles.
inline void write_json(std::ostream& os, const Json& j, int level = 0) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        detail::indent_to(os, level + 1);
        os << Json(it.key()).dump() << ": ";
        write_json(os, it.value(), level + 1);
      }
      detail::indent_to(os, level);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      os << '[';
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << (flat ? ", " : ",");
        if (!flat) detail::indent_to(os, level + 1);
        write_json(os, j[k], level + 1);
      }
      if (!flat) detail::indent_to(os, level);
      os << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        os << "null";
        return;
      }
      std::string s = format_double(x, 17);
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      os << s;
      return;
    }
    default:
      os << j.dump();
  }
}

inline std::string to_json_text(const Json& j) {
  std::ostringstream os;
  write_json(os, j);
  os << '\n';
  return os.str();
}

}  // namespace mframes
