#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cremona/algebra/modular_gcd.hpp"
#include "cremona/algebra/multipoly.hpp"

namespace cremona::algebra {

/// a / b when b divides a exactly, nullopt otherwise.
inline std::optional<MultiPoly> divide_exact(const MultiPoly& a, const MultiPoly& b) {
  require_same_table(a.vars(), b.vars());
  if (b.is_zero()) throw UsageError("division by the zero polynomial");
  if (a.is_zero()) return MultiPoly(a.vars());
  if (b.is_constant()) return (1 / b.leading_coeff()) * a;

  auto da = a.degrees();
  auto db = b.degrees();
  for (std::size_t v = 0; v < da.size(); ++v)
    if (db[v] > da[v]) return std::nullopt;

  std::map<Monomial, Rational, GrlexDescending> rem;
  for (const auto& t : a.terms()) rem.emplace_hint(rem.end(), t.mono, t.coeff);
  const Term& lead = b.leading_term();
  std::vector<Term> quotient;
  while (!rem.empty()) {
    auto top = rem.begin();
    if (!lead.mono.divides(top->first)) return std::nullopt;
    Term q{top->first / lead.mono, top->second / lead.coeff};
    for (const auto& t : b.terms()) {
      auto [it, inserted] = rem.try_emplace(q.mono * t.mono, 0);
      it->second -= q.coeff * t.coeff;
      if (it->second == 0) rem.erase(it);
    }
    quotient.push_back(std::move(q));
  }
  return MultiPoly::from_sorted_terms(a.vars(), std::move(quotient));
}

inline bool divides(const MultiPoly& divisor, const MultiPoly& p) { return divide_exact(p, divisor).has_value(); }

struct GcdResult {
  MultiPoly gcd;         // primitive, positive leading coefficient
  MultiPoly cofactor_a;  // a == gcd * cofactor_a
  MultiPoly cofactor_b;  // b == gcd * cofactor_b
};

namespace detail {

inline GcdResult monomial_gcd(const MultiPoly& mono, const MultiPoly& other) {
  Monomial m = mono.leading_term().mono;
  for (const auto& t : other.terms())
    for (std::size_t v = 0; v < m.size(); ++v) m[v] = std::min(m[v], t.mono[v]);
  MultiPoly g = MultiPoly::from_sorted_terms(mono.vars(), {Term{m, Rational(1)}});
  auto shift_down = [&](const MultiPoly& p) {
    std::vector<Term> terms;
    terms.reserve(p.size());
    for (const auto& t : p.terms()) terms.push_back({t.mono / m, t.coeff});
    return MultiPoly::from_sorted_terms(p.vars(), std::move(terms));
  };
  return {g, shift_down(mono), shift_down(other)};
}

}  // namespace detail

/// gcd with exact cofactors. gcd(p, 0) is the primitive part of p; gcd(0, 0) is 0.
inline GcdResult gcd_cofactors(const MultiPoly& a, const MultiPoly& b) {
  require_same_table(a.vars(), b.vars());
  const auto& vars = a.vars();
  if (a.is_zero() && b.is_zero()) return {MultiPoly(vars), MultiPoly(vars), MultiPoly(vars)};
  if (b.is_zero()) return {primitive_part(a), MultiPoly::constant(vars, content(a)), MultiPoly(vars)};
  if (a.is_zero()) return {primitive_part(b), MultiPoly(vars), MultiPoly::constant(vars, content(b))};
  if (a.is_constant() || b.is_constant()) return {MultiPoly::constant(vars, Rational(1)), a, b};
  if (a.size() == 1) return detail::monomial_gcd(a, b);
  if (b.size() == 1) {
    auto r = detail::monomial_gcd(b, a);
    return {r.gcd, r.cofactor_b, r.cofactor_a};
  }

  const Rational ca = content(a);
  const Rational cb = content(b);
  const MultiPoly pa = (1 / ca) * a;
  const MultiPoly pb = (1 / cb) * b;
  if (pa == pb)
    return {pa, MultiPoly::constant(vars, ca), MultiPoly::constant(vars, cb)};
  auto z = modular::integer_gcd(pa, pb);
  if (z.gcd.leading_coeff() < 0) {
    z.gcd = -z.gcd;
    z.cofactor_a = -z.cofactor_a;
    z.cofactor_b = -z.cofactor_b;
  }
  return {std::move(z.gcd), ca * z.cofactor_a, cb * z.cofactor_b};
}

inline MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b) { return gcd_cofactors(a, b).gcd; }

/// gcd of a list; zero for an empty list.
/// With three or more inputs, gcd(p_0, sum_i i * p_i) is tried first: it is a multiple of the
/// true gcd, so it is the gcd whenever it divides every input.
inline MultiPoly poly_gcd(std::span<const MultiPoly> polys) {
  if (polys.empty()) throw UsageError("gcd of an empty list");
  if (polys.size() >= 3 && !polys.front().is_zero()) {
    MultiPoly combo(polys.front().vars());
    for (std::size_t i = 1; i < polys.size(); ++i) combo += Rational(static_cast<long>(i)) * polys[i];
    if (!combo.is_zero()) {
      MultiPoly c = poly_gcd(polys.front(), combo);
      bool all = true;
      for (std::size_t i = 1; all && i < polys.size(); ++i) all = divides(c, polys[i]);
      if (all) return c;
    }
  }
  MultiPoly g(polys.front().vars());
  for (const auto& p : polys) {
    g = poly_gcd(g, p);
    if (!g.is_zero() && g.is_constant()) break;
  }
  return g;
}

/// Positive leading coefficient, content preserved up to sign.
inline MultiPoly with_positive_lead(const MultiPoly& p) { return (!p.is_zero() && p.leading_coeff() < 0) ? -p : p; }

// ---------------------------------------------------------------------------------------
// Reference gcd by primitive subresultant PRS in a recursive representation. Slow; kept as
// an independent check on the modular algorithm.

namespace prs {

using Coeffs = std::vector<MultiPoly>;  // coefficient of var^i at index i; trailing entries non-zero

inline Coeffs split(const MultiPoly& p, std::size_t var) {
  std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(std::max<std::int64_t>(p.degree(var), 0)) + 1);
  for (const auto& t : p.terms()) {
    Monomial m = t.mono;
    std::size_t e = m[var];
    m[var] = 0;
    buckets[e].push_back({std::move(m), t.coeff});
  }
  Coeffs out;
  for (auto& b : buckets) out.push_back(MultiPoly::from_terms(p.vars(), std::move(b)));
  return out;
}

inline MultiPoly join(const Coeffs& c, std::size_t var) {
  MultiPoly r(c.front().vars());
  for (std::size_t i = 0; i < c.size(); ++i) r += c[i] * MultiPoly::variable(r.vars(), var, static_cast<std::uint32_t>(i));
  return r;
}

inline void trim(Coeffs& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

inline MultiPoly exact(const MultiPoly& a, const MultiPoly& b) {
  auto q = divide_exact(a, b);
  if (!q) throw std::logic_error("inexact division in subresultant sequence");
  return *q;
}

/// lc(b)^(deg a - deg b + 1) * a mod b.
inline Coeffs prem(Coeffs a, const Coeffs& b) {
  const std::size_t db = b.size() - 1;
  const MultiPoly& lb = b.back();
  std::size_t steps = a.size() - db;
  while (!a.empty() && a.size() > db) {
    const std::size_t shift = a.size() - 1 - db;
    MultiPoly la = a.back();
    for (auto& c : a) c = c * lb;
    for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= la * b[j];
    a.pop_back();
    trim(a);
    --steps;
  }
  for (auto& c : a) c = c * pow(lb, static_cast<unsigned>(steps));
  return a;
}

inline MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

inline MultiPoly content_of(const Coeffs& c) {
  MultiPoly g(c.front().vars());
  for (const auto& x : c) g = gcd(g, x);
  return g;
}

inline MultiPoly gcd(const MultiPoly& a, const MultiPoly& b) {
  const auto& vars = a.vars();
  if (a.is_zero()) return primitive_part(b);
  if (b.is_zero()) return primitive_part(a);
  std::optional<std::size_t> main;
  for (std::size_t v = 0; v < vars->size() && !main; ++v)
    if (a.involves(v) || b.involves(v)) main = v;
  if (!main) return MultiPoly::constant(vars, Rational(1));
  const std::size_t v = *main;

  Coeffs ca = split(a, v), cb = split(b, v);
  const MultiPoly conta = content_of(ca), contb = content_of(cb);
  const MultiPoly c = gcd(conta, contb);
  for (auto& x : ca) x = exact(x, conta);
  for (auto& x : cb) x = exact(x, contb);
  if (ca.size() < cb.size()) std::swap(ca, cb);

  MultiPoly g = MultiPoly::constant(vars, Rational(1));
  MultiPoly h = g;
  while (cb.size() > 1) {
    const std::size_t delta = ca.size() - cb.size();
    Coeffs r = prem(ca, cb);
    if (r.empty()) break;
    ca = std::move(cb);
    const MultiPoly div = g * pow(h, static_cast<unsigned>(delta));
    for (auto& x : r) x = exact(x, div);
    cb = std::move(r);
    g = ca.back();
    if (delta == 0) continue;
    h = exact(pow(g, static_cast<unsigned>(delta)), pow(h, static_cast<unsigned>(delta - 1)));
  }
  Coeffs last = cb.size() == 1 ? Coeffs{MultiPoly::constant(vars, Rational(1))} : cb;
  const MultiPoly cl = content_of(last);
  for (auto& x : last) x = exact(x, cl);
  return with_positive_lead(primitive_part(c * join(last, v)));
}

}  // namespace prs

}  // namespace cremona::algebra
