#pragma once

#include <map>
#include <string>
#include <vector>

#include "cremona/model/dsl.hpp"

namespace cremona::model {

using ParamMap = std::map<std::string, Rational>;

struct BuiltinInfo {
  std::string name;
  std::vector<std::pair<std::string, Rational>> defaults;  // declaration order
  std::string body;  // equations after the var/param lines
  std::string vars;
};

inline const std::vector<BuiltinInfo>& builtin_catalog() {
  static const std::vector<BuiltinInfo> catalog{
      {"riccati", {{"a", Rational(0)}, {"b", Rational(0)}, {"c", Rational(1)}}, "x' = a + b*x + c*x^2\n", "x"},
      {"wp", {{"a", Rational(1, 2)}}, "x' = y\ny' = 6*x^2 - a\n", "x, y"},
      {"jacobi", {{"k", Rational(1, 5)}}, "p' = q*r\nq' = -p*r\nr' = -k^2*p*q\n", "p, q, r"},
  };
  return catalog;
}

/// Model source of a builtin with the given parameter values (defaults for the rest).
inline std::string builtin_source(const std::string& name, const ParamMap& params = {}) {
  for (const auto& info : builtin_catalog()) {
    if (info.name != name) continue;
    for (const auto& [p, v] : params) {
      bool ok = false;
      for (const auto& [d, dv] : info.defaults) ok = ok || d == p;
      if (!ok) throw UsageError("system '" + name + "' has no parameter '" + p + "'");
    }
    std::string src = "var " + info.vars + "\n";
    for (const auto& [p, dv] : info.defaults) {
      auto it = params.find(p);
      src += "param " + p + " = " + algebra::to_string(it == params.end() ? dv : it->second) + "\n";
    }
    return src + info.body;
  }
  throw UsageError("unknown builtin system '" + name + "' (expected riccati, wp or jacobi)");
}

inline QuadSystem builtin_system(const std::string& name, const ParamMap& params = {}) {
  QuadSystem parsed = parse_system(builtin_source(name, params));
  return QuadSystem(parsed.state_names(), parsed.params(), parsed.components(), name);
}

}  // namespace cremona::model
