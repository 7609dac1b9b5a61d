#pragma once

#include <vector>

#include "cremona/algebra/gcd.hpp"
#include "cremona/algebra/ratfunc.hpp"
#include "cremona/algebra/roots.hpp"
#include "cremona/scheme/cremona_map.hpp"

namespace cremona::periodicity {

using algebra::MultiPoly;
using algebra::RatFunc;
using algebra::Rational;
using algebra::VarTablePtr;
using scheme::CremonaMap;

/// C(dt)^n x0 with dt symbolic. Component i is numerators[i] / denominator; the tuple
/// (numerators, denominator) is primitive with no common factor, so the denominator vanishes
/// exactly where the state runs off to infinity.
struct SymbolicOrbit {
  std::vector<Rational> x0;
  std::size_t n = 0;
  VarTablePtr table;  // the single variable dt
  std::vector<MultiPoly> numerators;
  MultiPoly denominator;
  std::vector<RatFunc> components;
  /// Step denominator D(x_k, dt) in projective form for the steps producing x_1..x_n.
  std::vector<MultiPoly> intermediate_denominators;
};

inline VarTablePtr step_table() { return algebra::make_vartable({"dt"}); }

namespace detail {

/// Divides every entry of a projective tuple by their joint gcd and fixes the overall sign so
/// that the last entry has a positive leading coefficient. Each hint that divides every entry
/// is divided out first; the full gcd runs only if the rest is not certainly coprime.
inline void reduce_projective(std::vector<MultiPoly>& tuple, const std::vector<MultiPoly>& hints = {}) {
  for (const auto& h : hints) {
    if (h.is_constant()) continue;
    for (;;) {
      std::vector<MultiPoly> quot;
      for (const auto& p : tuple) {
        auto q = algebra::divide_exact(p, h);
        if (!q) break;
        quot.push_back(std::move(*q));
      }
      if (quot.size() != tuple.size()) break;
      tuple = std::move(quot);
    }
  }
  if (!algebra::modular::certainly_coprime(tuple)) {
    MultiPoly g = algebra::poly_gcd(std::span<const MultiPoly>(tuple));
    if (!g.is_constant()) {
      for (auto& p : tuple) p = *algebra::divide_exact(p, g);
    }
  }
  Rational c = 0;
  for (const auto& p : tuple) {
    if (p.is_zero()) continue;
    Rational q = algebra::content(p);
    c = c == 0 ? abs(q) : algebra::make_rational(gcd(c.get_num(), q.get_num()), lcm(c.get_den(), q.get_den()));
  }
  if (c == 0) return;
  if (tuple.back().leading_coeff() < 0) c = -c;
  const Rational inv = 1 / c;
  for (auto& p : tuple) p = inv * p;
}

/// One application of the map to the projective state (a, q): returns the new tuple
/// (a_1..a_m, q), reduced, and the step denominator D(a/q) homogenized by q.
/// `hints` are likely common factors, typically earlier denominators.
inline std::pair<std::vector<MultiPoly>, MultiPoly> projective_step(const CremonaMap& map,
                                                                    const std::vector<MultiPoly>& a,
                                                                    const MultiPoly& q,
                                                                    const std::vector<MultiPoly>& hints = {}) {
  std::vector<std::size_t> state_vars(map.dimension());
  for (std::size_t i = 0; i < state_vars.size(); ++i) state_vars[i] = i;
  const auto degree = map.state_degree();
  std::vector<MultiPoly> next;
  for (const auto& p : map.numerators()) next.push_back(algebra::compose_homogeneous(p, state_vars, a, q, degree));
  MultiPoly d = algebra::compose_homogeneous(map.denominator(), state_vars, a, q, degree);
  next.push_back(d);
  if (!d.is_zero()) reduce_projective(next, hints);
  return {std::move(next), std::move(d)};
}

}  // namespace detail

/// Stages 1..n of the orbit of x0 under the map with symbolic step.
inline std::vector<SymbolicOrbit> iterate_symbolic_stages(const CremonaMap& map, const std::vector<Rational>& x0,
                                                          std::size_t n) {
  const std::size_t m = map.dimension();
  if (x0.size() != m) throw UsageError("initial state length does not match the system dimension");
  if (n < 1) throw UsageError("the period must be at least 1");
  const auto& mt = map.table();
  auto table = step_table();
  std::vector<MultiPoly> a;
  for (const auto& v : x0) a.push_back(MultiPoly::constant(mt, v));
  MultiPoly q = MultiPoly::constant(mt, Rational(1));
  std::vector<MultiPoly> dens;
  std::vector<SymbolicOrbit> out;
  for (std::size_t k = 1; k <= n; ++k) {
    auto [next, d] = detail::projective_step(map, a, q);
    if (d.is_zero())
      throw ExceptionalLocusError("the step denominator vanishes identically in dt at step " + std::to_string(k));
    dens.push_back(algebra::with_positive_lead(algebra::primitive_part(d.rebase(table))));
    q = next.back();
    next.pop_back();
    a = std::move(next);

    SymbolicOrbit s;
    s.x0 = x0;
    s.n = k;
    s.table = table;
    for (const auto& p : a) s.numerators.push_back(p.rebase(table));
    s.denominator = q.rebase(table);
    for (const auto& p : s.numerators) s.components.push_back(RatFunc(p, s.denominator));
    s.intermediate_denominators = dens;
    out.push_back(std::move(s));
  }
  return out;
}

inline SymbolicOrbit iterate_symbolic(const CremonaMap& map, const std::vector<Rational>& x0, std::size_t n) {
  return std::move(iterate_symbolic_stages(map, x0, n).back());
}

/// gcd over i of numer(component_i - x0_i) before any factor is removed.
inline MultiPoly period_gcd(const SymbolicOrbit& orbit) {
  std::vector<MultiPoly> diffs;
  for (std::size_t i = 0; i < orbit.numerators.size(); ++i)
    diffs.push_back(orbit.numerators[i] - orbit.x0[i] * orbit.denominator);
  return algebra::with_positive_lead(algebra::poly_gcd(std::span<const MultiPoly>(diffs)));
}

/// Removes from p every factor it shares with one of `divisors`.
inline MultiPoly remove_shared_factors(MultiPoly p, const std::vector<MultiPoly>& divisors) {
  for (const auto& d : divisors) {
    if (p.is_constant()) break;
    for (;;) {
      MultiPoly g = algebra::poly_gcd(p, d);
      if (g.is_constant()) break;
      p = *algebra::divide_exact(p, g);
    }
  }
  return p;
}

/// The period polynomial G: squarefree primitive part of the period gcd with the trivial root
/// dt = 0 and every root of an intermediate denominator removed. Returns 1 when no nonzero
/// step is periodic.
inline MultiPoly period_polynomial(const SymbolicOrbit& orbit) {
  MultiPoly g = period_gcd(orbit);
  const auto& t = orbit.table;
  if (g.is_zero()) throw UsageError("x0 is an equilibrium: every step size is periodic");
  const MultiPoly dt = MultiPoly::variable(t, 0);
  while (!g.is_constant() && g.constant_term() == 0) g = *algebra::divide_exact(g, dt);
  g = remove_shared_factors(std::move(g), orbit.intermediate_denominators);
  if (g.is_constant()) return MultiPoly::constant(t, Rational(1));
  return algebra::squarefree_part(g, 0);
}

}  // namespace cremona::periodicity
