#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "cremona/periodicity/symbolic_orbit.hpp"
#include "cremona/util/parallel.hpp"

namespace cremona::equiperiodic {

using algebra::MultiPoly;
using algebra::RatFunc;
using algebra::Rational;
using algebra::VarTablePtr;
using scheme::CremonaMap;

struct IterateOptions {
  /// Largest number of terms any stage polynomial may reach.
  std::size_t term_budget = 2'000'000;
  /// Substitute dt = fixed_dt into the map before iterating.
  std::optional<Rational> fixed_dt;
};

/// C^n in projective form over the map table (x_1..x_m, dt): component i = numerators[i] / denominator.
struct Stage {
  std::size_t n = 0;
  std::vector<MultiPoly> numerators;
  MultiPoly denominator;
  /// Step denominators D(x_k) homogenized, for the steps producing x_1..x_n.
  std::vector<MultiPoly> step_denominators;

  std::vector<RatFunc> components() const {
    std::vector<RatFunc> out;
    for (const auto& p : numerators) out.emplace_back(p, denominator);
    return out;
  }
  std::size_t terms() const {
    std::size_t t = denominator.size();
    for (const auto& p : numerators) t += p.size();
    return t;
  }
};

namespace detail {

inline std::vector<MultiPoly> specialize(const std::vector<MultiPoly>& ps, std::size_t dt, const Rational& value) {
  std::vector<MultiPoly> out;
  for (const auto& p : ps) out.push_back(algebra::detail::substitute_constants(p, {{dt, value}}));
  return out;
}

}  // namespace detail

/// Stages 1..n of the n-fold composition of the map with itself, the state kept symbolic.
inline std::vector<Stage> iterate_stages(const CremonaMap& map, std::size_t n, const IterateOptions& opt = {}) {
  if (n < 1) throw UsageError("the period must be at least 1");
  const std::size_t m = map.dimension();
  const auto& t = map.table();
  const CremonaMap* use = &map;
  std::optional<CremonaMap> fixed;
  if (opt.fixed_dt) {
    auto num = detail::specialize(map.numerators(), map.dt_index(), *opt.fixed_dt);
    auto den = detail::specialize({map.denominator()}, map.dt_index(), *opt.fixed_dt).front();
    if (den.is_zero()) throw ExceptionalLocusError("the step denominator vanishes identically at this dt");
    fixed.emplace(map.scheme_ptr(), t, std::move(num), std::move(den));
    use = &*fixed;
  }
  std::vector<MultiPoly> a;
  for (std::size_t i = 0; i < m; ++i) a.push_back(MultiPoly::variable(t, i));
  MultiPoly q = MultiPoly::constant(t, Rational(1));
  std::vector<MultiPoly> dens;
  std::vector<Stage> out;
  MultiPoly q_before = q;
  for (std::size_t k = 1; k <= n; ++k) {
    // the common factor of a stage is typically the denominator from two stages back
    auto [next, d] = periodicity::detail::projective_step(*use, a, q, {q_before, q});
    q_before = q;
    if (d.is_zero()) throw ExceptionalLocusError("the step denominator vanishes identically at step " + std::to_string(k));
    dens.push_back(algebra::with_positive_lead(algebra::primitive_part(d)));
    q = next.back();
    next.pop_back();
    a = std::move(next);
    Stage s{k, a, q, dens};
    if (s.terms() > opt.term_budget) {
      std::string diag;
      for (const auto& prev : out) diag += " " + std::to_string(prev.n) + ":" + std::to_string(prev.terms());
      throw ResourceError("symbolic iteration exceeded the term budget of " + std::to_string(opt.term_budget) +
                          " at stage " + std::to_string(k) + " (" + std::to_string(s.terms()) +
                          " terms); terms per completed stage:" + (diag.empty() ? " none" : diag));
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<RatFunc> iterate_fully_symbolic(const CremonaMap& map, std::size_t n, const IterateOptions& opt = {}) {
  return iterate_stages(map, n, opt).back().components();
}

struct EquiperiodicSet {
  std::size_t n = 0;
  MultiPoly F;  // over the map table; 1 when the set is empty
  std::vector<std::size_t> state_vars;
  std::optional<Rational> fixed_dt;
  std::int64_t state_degree = 0;
  std::int64_t dt_degree = 0;  // 0 on the fixed-dt path
  std::optional<MultiPoly> reduced;  // F / prod over proper divisors d of gcd(F, F_d)
  std::optional<std::int64_t> reduced_state_degree;

  bool empty() const { return F.is_constant(); }
  /// True when F involves dt only, so at a fixed step the set is all of phase space or nothing.
  bool state_free() const { return state_degree <= 0; }
};

/// F_n from a computed stage: primitive part of gcd_i(A_i - x_i Q) with the power of dt (the
/// trivial step dt = 0) and the factors shared with any step denominator removed, positive
/// leading coefficient.
inline MultiPoly equiperiodic_from_stage(const Stage& s) {
  std::vector<MultiPoly> diffs;
  const auto& t = s.denominator.vars();
  const std::size_t m = s.numerators.size();
  for (std::size_t i = 0; i < m; ++i) diffs.push_back(s.numerators[i] - MultiPoly::variable(t, i) * s.denominator);
  MultiPoly g = algebra::poly_gcd(std::span<const MultiPoly>(diffs));
  if (g.is_zero()) throw UsageError("the map is the identity at this step");
  std::uint32_t low = UINT32_MAX;
  for (const auto& term : g.terms()) low = std::min(low, term.mono[m]);
  if (low > 0) {
    std::vector<algebra::Term> terms;
    for (auto term : g.terms()) {
      term.mono[m] -= low;
      terms.push_back(std::move(term));
    }
    g = MultiPoly::from_sorted_terms(t, std::move(terms));
  }
  g = periodicity::remove_shared_factors(std::move(g), s.step_denominators);
  if (g.is_constant()) return MultiPoly::constant(t, Rational(1));
  return algebra::with_positive_lead(algebra::primitive_part(g));
}

inline EquiperiodicSet make_set(const CremonaMap& map, const Stage& s, const std::optional<Rational>& fixed_dt) {
  EquiperiodicSet e;
  e.n = s.n;
  e.fixed_dt = fixed_dt;
  e.F = equiperiodic_from_stage(s);
  for (std::size_t i = 0; i < map.dimension(); ++i) e.state_vars.push_back(i);
  e.state_degree = std::max<std::int64_t>(e.F.degree_in(e.state_vars), 0);
  e.dt_degree = std::max<std::int64_t>(e.F.degree(map.dt_index()), 0);
  return e;
}

/// Attaches the divisor-reduced variant using the sets of every proper divisor.
inline void attach_reduced(EquiperiodicSet& e, const std::vector<const EquiperiodicSet*>& divisors) {
  MultiPoly r = e.F;
  for (const auto* d : divisors) {
    if (r.is_constant()) break;
    MultiPoly g = algebra::poly_gcd(r, d->F);
    if (!g.is_constant()) r = *algebra::divide_exact(r, g);
  }
  r = algebra::with_positive_lead(algebra::primitive_part(r));
  e.reduced_state_degree = std::max<std::int64_t>(r.degree_in(e.state_vars), 0);
  e.reduced = std::move(r);
}

inline EquiperiodicSet equiperiodic_polynomial(const CremonaMap& map, std::size_t n, const IterateOptions& opt = {}) {
  auto stages = iterate_stages(map, n, opt);
  return make_set(map, stages.back(), opt.fixed_dt);
}

/// Sets for every n in ns from one iteration; with `reduced`, every proper divisor is included
/// in the iteration and each set carries its divisor-reduced variant.
inline std::vector<EquiperiodicSet> equiperiodic_range(const CremonaMap& map, const std::vector<std::size_t>& ns,
                                                       const IterateOptions& opt = {}, bool reduced = false,
                                                       std::size_t threads = 1) {
  std::size_t top = 0;
  for (auto n : ns) top = std::max(top, n);
  if (top == 0) return {};
  auto stages = iterate_stages(map, top, opt);
  std::vector<std::size_t> needed(top, 0);
  for (auto n : ns) {
    needed[n - 1] = 1;
    if (reduced)
      for (std::size_t d = 1; d < n; ++d)
        if (n % d == 0) needed[d - 1] = 1;
  }
  std::vector<std::size_t> which;
  for (std::size_t k = 0; k < top; ++k)
    if (needed[k]) which.push_back(k);
  auto sets = util::parallel_map(which.size(), threads,
                                 [&](std::size_t i) { return make_set(map, stages[which[i]], opt.fixed_dt); });
  std::vector<std::optional<EquiperiodicSet>> by_n(top + 1);
  for (std::size_t i = 0; i < which.size(); ++i) by_n[which[i] + 1] = std::move(sets[i]);
  std::vector<EquiperiodicSet> out;
  for (auto n : ns) {
    EquiperiodicSet e = *by_n[n];
    if (reduced) {
      std::vector<const EquiperiodicSet*> divs;
      for (std::size_t d = 1; d < n; ++d)
        if (n % d == 0) divs.push_back(&*by_n[d]);
      attach_reduced(e, divs);
    }
    out.push_back(std::move(e));
  }
  return out;
}

struct DegreeRow {
  std::size_t n;
  std::int64_t degree;
  std::optional<std::int64_t> reduced_degree;
};

inline std::vector<DegreeRow> degree_table(const CremonaMap& map, const std::vector<std::size_t>& ns,
                                           const IterateOptions& opt = {}, bool reduced = false,
                                           std::size_t threads = 1) {
  std::vector<DegreeRow> rows;
  for (const auto& e : equiperiodic_range(map, ns, opt, reduced, threads))
    rows.push_back({e.n, e.state_degree, e.reduced_state_degree});
  return rows;
}

/// Fixed steps used by the fast degree path. At a special step the specialized gcd can be
/// larger than the generic one; the median over three unrelated steps outvotes one such step.
inline const std::vector<Rational>& default_probe_steps() {
  static const std::vector<Rational> steps{Rational(7, 11), Rational(13, 17), Rational(19, 23)};
  return steps;
}

/// Degree table from the fixed-step path: per row, the median over the probe steps.
inline std::vector<DegreeRow> probe_degree_table(const CremonaMap& map, const std::vector<std::size_t>& ns,
                                                 bool reduced = false, std::size_t threads = 1,
                                                 std::size_t term_budget = IterateOptions{}.term_budget) {
  const auto& probes = default_probe_steps();
  auto tables = util::parallel_map(probes.size(), threads, [&](std::size_t i) {
    IterateOptions opt;
    opt.term_budget = term_budget;
    opt.fixed_dt = probes[i];
    return degree_table(map, ns, opt, reduced);
  });
  auto median = [](std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  std::vector<DegreeRow> rows;
  for (std::size_t r = 0; r < ns.size(); ++r) {
    std::vector<std::int64_t> deg, red;
    for (const auto& t : tables) {
      deg.push_back(t[r].degree);
      if (t[r].reduced_degree) red.push_back(*t[r].reduced_degree);
    }
    DegreeRow row{ns[r], median(deg), std::nullopt};
    if (!red.empty()) row.reduced_degree = median(red);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cremona::equiperiodic
