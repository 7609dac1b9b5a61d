#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "cremona/dynamics/orbit.hpp"

namespace cremona::dynamics {

inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_value(const Rational& v) { return algebra::to_string(v); }

/// Header `step,t,<states>,<invariants>` and one row per state.
template <typename T>
void write_csv(std::ostream& out, const Orbit<T>& orbit) {
  out << "step,t";
  for (const auto& n : orbit.state_names) out << ',' << n;
  for (const auto& n : orbit.invariant_names) out << ',' << n;
  out << '\n';
  for (std::size_t k = 0; k < orbit.states.size(); ++k) {
    out << k << ',' << format_value(orbit.time(k));
    for (const auto& v : orbit.states[k]) out << ',' << format_value(v);
    for (const auto& trace : orbit.invariant_traces) out << ',' << format_value(trace[k]);
    out << '\n';
  }
}

}  // namespace cremona::dynamics
