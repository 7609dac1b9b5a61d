#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cremona/algebra/roots.hpp"
#include "cremona/periodicity/quotient_ring.hpp"
#include "cremona/periodicity/symbolic_orbit.hpp"
#include "cremona/scheme/step.hpp"
#include "cremona/util/parallel.hpp"

namespace cremona::periodicity {

using algebra::IsolatingInterval;

struct FindOptions {
  Rational lo{0};   // exclusive
  Rational hi{20};  // inclusive
  Rational eps{1, 10000};
  double tol = 1e-6;          // float closure tolerance, max norm
  bool exact_check = false;   // also run the quotient-ring check
  std::size_t exact_degree_cap = 64;
};

struct VerifyReport {
  double value = 0.0;
  double residual = 0.0;  // max |x_n - x0|, infinite when the orbit meets a pole
  bool float_ok = false;
  bool exact_ran = false;
  bool exact_ok = false;
  MultiPoly factor;  // modulus of the exact check
  std::string note;
  bool passed() const { return float_ok && (!exact_ran || exact_ok); }
};

struct PeriodRoot {
  IsolatingInterval interval;
  Rational value;       // refined to eps
  double approx = 0.0;  // refined to double precision
  std::size_t minimal_period = 0;
  bool spurious = false;
  VerifyReport verification;
};

struct PeriodFinding {
  std::size_t n = 0;
  MultiPoly G;
  std::vector<PeriodRoot> roots;     // certified and verified, ascending
  std::vector<PeriodRoot> rejected;  // failed verification
  Rational lo, hi, eps;
};

/// The non-rational part of G, or (dt - r) when the root is the rational r. Rational roots are
/// recognised exactly as the simplest fraction in a tight isolating interval.
inline MultiPoly working_factor(const MultiPoly& g, const IsolatingInterval& root) {
  const auto& t = g.vars();
  const MultiPoly dt = MultiPoly::variable(t, 0);
  const Rational tight(1, algebra::Integer(1) << 256);
  auto rational_root = [&](const IsolatingInterval& iv) -> std::optional<Rational> {
    const Rational r = algebra::refine_root(iv, tight);
    if (iv.poly->sign_at(r) == 0) return r;
    return std::nullopt;
  };
  if (auto r = rational_root(root)) return dt - MultiPoly::constant(t, *r);
  MultiPoly rest = g;
  for (const auto& iv : algebra::isolate_real_roots(g, 0))
    if (auto r = rational_root(iv)) rest = *algebra::divide_exact(rest, dt - MultiPoly::constant(t, *r));
  return algebra::with_positive_lead(algebra::primitive_part(rest));
}

/// Steps x0 n times in Q[dt]/(g) and compares with x0. nullopt when a step divides by a zero
/// divisor, which happens only if g shares a factor with a step denominator.
inline std::optional<bool> quotient_ring_closure(const scheme::PolarizedScheme& scheme, const std::vector<Rational>& x0,
                                                 const MultiPoly& g, std::size_t n) {
  auto mod = std::make_shared<const qpoly::Poly>(qpoly::from_multipoly(g, 0));
  const QuotientElem dt(qpoly::Poly{Rational(0), Rational(1)}, mod);
  scheme::Coefficients<QuotientElem> coeffs(scheme.system());
  std::vector<QuotientElem> x(x0.begin(), x0.end());
  try {
    for (std::size_t k = 0; k < n; ++k) {
      auto sys = coeffs.polarized_system(x, dt);
      auto next = scheme::solve_exact(std::move(sys.a), std::move(sys.rhs));
      if (!next) return std::nullopt;
      x = std::move(*next);
    }
  } catch (const SingularError&) {
    return std::nullopt;
  }
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] == QuotientElem(x0[i]))) return false;
  return true;
}

/// Float closure at `value` and, when `exact` is set and an interval of G is given, the
/// quotient-ring closure modulo the working factor containing the root.
inline VerifyReport verify_period(const scheme::PolarizedScheme& scheme, const std::vector<Rational>& x0, double value,
                                  std::size_t n, double tol, const IsolatingInterval* root = nullptr,
                                  const MultiPoly* g = nullptr, bool exact = false,
                                  std::size_t exact_degree_cap = 64) {
  VerifyReport r;
  r.value = value;
  scheme::FloatStepper stepper(scheme);
  std::vector<double> x;
  for (const auto& v : x0) x.push_back(v.get_d());
  const std::vector<double> start = x;
  try {
    for (std::size_t k = 0; k < n; ++k) x = stepper.step(x, value);
    r.residual = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r.residual = std::max(r.residual, std::fabs(x[i] - start[i]));
  } catch (const PoleError&) {
    r.residual = std::numeric_limits<double>::infinity();
    r.note = "float orbit meets a pole";
  }
  r.float_ok = r.residual < tol;
  if (exact && root && g) {
    r.factor = working_factor(*g, *root);
    if (r.factor.total_degree() > static_cast<std::int64_t>(exact_degree_cap)) {
      r.note = "exact check skipped: factor degree " + std::to_string(r.factor.total_degree()) + " exceeds the cap";
    } else if (auto ok = quotient_ring_closure(scheme, x0, r.factor, n)) {
      r.exact_ran = true;
      r.exact_ok = *ok;
    } else {
      r.note = "exact check skipped: factor meets a step denominator";
    }
  }
  return r;
}

inline std::vector<std::size_t> proper_divisors(std::size_t n) {
  std::vector<std::size_t> d;
  for (std::size_t k = 1; k < n; ++k)
    if (n % k == 0) d.push_back(k);
  return d;
}

/// True when the root isolated by iv also annihilates h.
inline bool shares_root(const MultiPoly& g, const IsolatingInterval& iv, const MultiPoly& h) {
  if (h.is_constant()) return false;
  MultiPoly c = algebra::poly_gcd(g, h);
  if (c.is_constant()) return false;
  algebra::SturmSequence s(algebra::UPolyZ::from_multipoly(c, 0).primitive());
  return s.count_roots(iv.lo, iv.hi) > 0;
}

/// Period-n steps from precomputed stages 1..N, N >= n.
inline PeriodFinding find_period_steps(const scheme::PolarizedScheme& scheme, const std::vector<SymbolicOrbit>& stages,
                                       std::size_t n, const FindOptions& opt = {}) {
  if (n < 1 || n > stages.size()) throw UsageError("period outside the computed stages");
  if (opt.eps <= 0) throw UsageError("eps must be positive");
  if (opt.lo < 0 || opt.hi <= opt.lo) throw UsageError("search range must satisfy 0 <= lo < hi");
  PeriodFinding f;
  f.n = n;
  f.lo = opt.lo;
  f.hi = opt.hi;
  f.eps = opt.eps;
  const auto& orbit = stages[n - 1];
  f.G = period_polynomial(orbit);
  if (f.G.is_constant()) return f;
  const auto& x0 = orbit.x0;
  std::vector<std::pair<std::size_t, MultiPoly>> divisor_polys;
  for (auto d : proper_divisors(n)) divisor_polys.emplace_back(d, period_polynomial(stages[d - 1]));

  for (const auto& iv : algebra::isolate_real_roots(f.G, 0, {opt.lo, opt.hi})) {
    PeriodRoot root;
    root.value = algebra::refine_root(iv, opt.eps, &root.interval);
    root.approx = algebra::refine_root_double(iv);
    root.minimal_period = n;
    for (const auto& [d, gd] : divisor_polys) {
      if (shares_root(f.G, iv, gd)) {
        root.minimal_period = d;
        break;
      }
    }
    root.verification = verify_period(scheme, x0, root.approx, n, opt.tol, &iv, &f.G, opt.exact_check,
                                      opt.exact_degree_cap);
    root.spurious = !root.verification.passed();
    (root.spurious ? f.rejected : f.roots).push_back(std::move(root));
  }
  return f;
}

inline PeriodFinding find_period_steps(const CremonaMap& map, const std::vector<Rational>& x0, std::size_t n,
                                       const FindOptions& opt = {}) {
  return find_period_steps(map.scheme(), iterate_symbolic_stages(map, x0, n), n, opt);
}

/// One finding per period in ns, sharing the symbolic iteration. Order follows ns.
inline std::vector<PeriodFinding> find_period_steps(const CremonaMap& map, const std::vector<Rational>& x0,
                                                    const std::vector<std::size_t>& ns, const FindOptions& opt = {},
                                                    std::size_t threads = 1) {
  std::size_t top = 0;
  for (auto n : ns) top = std::max(top, n);
  if (top == 0) return {};
  const auto stages = iterate_symbolic_stages(map, x0, top);
  return util::parallel_map(ns.size(), threads,
                            [&](std::size_t i) { return find_period_steps(map.scheme(), stages, ns[i], opt); });
}

struct TransitionRow {
  std::size_t n;
  double dt_min;
  double product;  // n * dt_min
};

/// (n, n * smallest certified step) for each n in ns admitting a root; other rows are omitted.
inline std::vector<TransitionRow> period_transition_table(const CremonaMap& map, const std::vector<Rational>& x0,
                                                          const std::vector<std::size_t>& ns,
                                                          const FindOptions& opt = {}, std::size_t threads = 1) {
  std::vector<TransitionRow> rows;
  for (const auto& f : find_period_steps(map, x0, ns, opt, threads)) {
    if (f.roots.empty()) continue;
    const double dt = f.roots.front().approx;
    rows.push_back({f.n, dt, static_cast<double>(f.n) * dt});
  }
  return rows;
}

}  // namespace cremona::periodicity
