#pragma once

#include <string>
#include <vector>

#include "cremona/model/quad_system.hpp"
#include "cremona/algebra/text.hpp"

namespace cremona::model {

/// First integral over the state table; parameters are folded in.
struct Invariant {
  std::string name;
  std::string formula;  // symbolic, parameters by name
  MultiPoly expr;
};

/// sum_i dI/dx_i * f_i
inline MultiPoly lie_derivative(const QuadSystem& sys, const MultiPoly& expr) {
  MultiPoly out(sys.state_table());
  for (std::size_t i = 0; i < sys.dimension(); ++i) out += expr.derivative(i) * sys.rhs_poly(i);
  return out;
}

/// Parses `formula` with the system's parameters and checks conservation exactly.
inline Invariant make_invariant(const QuadSystem& sys, std::string name, std::string formula) {
  auto resolver = [&](std::string_view id) -> std::optional<Rational> {
    for (const auto& [p, v] : sys.params())
      if (p == id) return v;
    return std::nullopt;
  };
  MultiPoly expr = algebra::ExpressionParser(formula, sys.state_table(), resolver).parse();
  if (!lie_derivative(sys, expr).is_zero())
    throw UsageError("'" + formula + "' is not conserved by the system");
  return {std::move(name), std::move(formula), std::move(expr)};
}

inline std::vector<Invariant> known_invariants(const QuadSystem& sys) {
  if (sys.origin() == "wp") return {make_invariant(sys, "E", "y^2/2 - 2*x^3 + a*x")};
  if (sys.origin() == "jacobi")
    return {make_invariant(sys, "I1", "p^2 + q^2"), make_invariant(sys, "I2", "k^2*p^2 + r^2")};
  return {};
}

template <typename T>
std::vector<T> evaluate_invariants(const std::vector<Invariant>& invs, std::span<const T> x) {
  std::vector<T> out;
  out.reserve(invs.size());
  for (const auto& inv : invs) out.push_back(inv.expr.evaluate(x));
  return out;
}

}  // namespace cremona::model
