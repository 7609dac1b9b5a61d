#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

#include "cremona/algebra/gcd.hpp"
#include "cremona/algebra/upoly.hpp"

namespace cremona::algebra {

/// p / gcd(p, dp/dvar), primitive with positive leading coefficient.
inline MultiPoly squarefree_part(const MultiPoly& p, std::size_t var) {
  if (p.is_zero()) throw UsageError("squarefree part of the zero polynomial");
  MultiPoly dp = p.derivative(var);
  if (dp.is_zero()) return with_positive_lead(primitive_part(p));
  auto r = gcd_cofactors(p, dp);
  return with_positive_lead(primitive_part(r.cofactor_a));
}

/// Sturm sequence of a squarefree polynomial, kept with primitive integer members.
class SturmSequence {
 public:
  explicit SturmSequence(const UPolyZ& p) {
    if (p.is_zero()) throw UsageError("Sturm sequence of the zero polynomial");
    seq_.push_back(p);
    UPolyZ d = p.derivative();
    if (d.is_zero()) return;
    seq_.push_back(d.primitive());
    while (seq_.back().degree() > 0) {
      const UPolyZ& a = seq_[seq_.size() - 2];
      const UPolyZ& b = seq_.back();
      UPolyZ r = pseudo_remainder(a, b);
      if (r.is_zero()) break;
      // prem multiplies by lc(b)^(da - db + 1); undo its sign, then negate
      const long power = a.degree() - b.degree() + 1;
      const bool flip = sgn(b.lead()) < 0 && power % 2 == 1;
      r = r.primitive();
      seq_.push_back(flip ? r : r.negated());
    }
  }

  const UPolyZ& poly() const noexcept { return seq_.front(); }
  const std::vector<UPolyZ>& members() const noexcept { return seq_; }

  int variations(const Rational& x) const {
    std::vector<int> s;
    s.reserve(seq_.size());
    for (const auto& q : seq_) s.push_back(q.sign_at(x));
    return count(s);
  }

  int variations_at_infinity(bool positive) const {
    std::vector<int> s;
    for (const auto& q : seq_) s.push_back(q.sign_at_infinity(positive));
    return count(s);
  }

  /// Distinct real roots in (lo, hi]; nullopt bounds are infinite.
  int count_roots(const std::optional<Rational>& lo, const std::optional<Rational>& hi) const {
    int vl = lo ? variations(*lo) : variations_at_infinity(false);
    int vh = hi ? variations(*hi) : variations_at_infinity(true);
    return vl - vh;
  }

 private:
  static int count(const std::vector<int>& s) {
    int last = 0, changes = 0;
    for (int v : s) {
      if (v == 0) continue;
      if (last != 0 && v != last) ++changes;
      last = v;
    }
    return changes;
  }

  std::vector<UPolyZ> seq_;
};

struct IsolatingInterval {
  Rational lo;
  Rational hi;
  std::shared_ptr<const UPolyZ> poly;  // squarefree; exactly one root in (lo, hi]
};

struct RootRange {
  std::optional<Rational> lo;  // exclusive; nullopt = -inf
  std::optional<Rational> hi;  // inclusive; nullopt = +inf
};

/// Bound strictly exceeding the absolute value of every complex root.
inline Rational cauchy_bound(const UPolyZ& p) {
  Rational m = 0;
  const Integer lead = abs(p.lead());
  for (long i = 0; i < p.degree(); ++i) {
    Rational r(abs(p.coeffs()[static_cast<std::size_t>(i)]), lead);
    r.canonicalize();
    if (r > m) m = r;
  }
  return m + 1;
}

namespace detail {

/// A split point in (lo, hi) near the midpoint at which p does not vanish.
inline Rational nonroot_split(const UPolyZ& p, const Rational& lo, const Rational& hi) {
  Rational mid = (lo + hi) / 2;
  Rational step = (hi - lo) / 4;
  while (p.sign_at(mid) == 0) {
    step /= 2;
    mid += step;
  }
  return mid;
}

/// The rational with the smallest denominator in [a, b], a <= b.
inline Rational simplest_between(const Rational& a, const Rational& b) {
  if (a <= 0 && b >= 0) return Rational(0);
  if (b < 0) return Rational(-simplest_between(Rational(-b), Rational(-a)));
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  if (fl == a) return a;
  if (fl + 1 <= b) return Rational(fl + 1);
  Rational inner = simplest_between(Rational(1 / (b - fl)), Rational(1 / (a - fl)));
  return Rational(fl + 1 / inner);
}

}  // namespace detail

/// Certified isolation of the real roots of p (univariate in var) in the range (lo, hi].
/// Interval endpoints avoid roots except where the root is itself an endpoint of the range.
inline std::vector<IsolatingInterval> isolate_real_roots(const MultiPoly& p, std::size_t var,
                                                         const RootRange& range = {}) {
  if (p.is_zero()) throw UsageError("root isolation of the zero polynomial");
  auto poly = std::make_shared<const UPolyZ>(UPolyZ::from_multipoly(p, var).primitive());
  std::vector<IsolatingInterval> out;
  if (poly->degree() <= 0) return out;
  const SturmSequence sturm(*poly);
  const Rational bound = cauchy_bound(*poly);
  Rational lo = range.lo ? *range.lo : Rational(-bound);
  Rational hi = range.hi ? *range.hi : bound;
  if (range.hi && hi > bound) hi = bound;
  if (range.lo && lo < -bound) lo = -bound;
  if (lo >= hi) return out;

  struct Span {
    Rational lo, hi;
    int count;
  };
  std::vector<Span> work{{lo, hi, sturm.count_roots(lo, hi)}};
  std::vector<Span> found;
  while (!work.empty()) {
    Span s = work.back();
    work.pop_back();
    if (s.count == 0) continue;
    if (s.count == 1) {
      found.push_back(s);
      continue;
    }
    Rational mid = detail::nonroot_split(*poly, s.lo, s.hi);
    int left = sturm.count_roots(s.lo, mid);
    work.push_back({mid, s.hi, s.count - left});
    work.push_back({s.lo, mid, left});
  }
  for (auto& s : found) {
    // a root sitting on the open end belongs to the neighbouring interval; move off it
    if (poly->sign_at(s.lo) == 0) {
      Rational w = s.hi - s.lo;
      Rational a = s.lo + w / 2;
      while (poly->sign_at(a) == 0 || sturm.count_roots(s.lo, a) != 0) {
        w /= 2;
        a = s.lo + w / 2;
      }
      s.lo = a;
    }
    out.push_back({s.lo, s.hi, poly});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  return out;
}

/// Shrinks an isolating interval below eps by exact bisection. Returns the root itself when it
/// is found exactly, otherwise the midpoint of the final interval.
inline Rational refine_root(const IsolatingInterval& iv, const Rational& eps, IsolatingInterval* narrowed = nullptr) {
  if (eps <= 0) throw UsageError("refinement tolerance must be positive");
  const UPolyZ& p = *iv.poly;
  Rational lo = iv.lo, hi = iv.hi;
  auto finish = [&](const Rational& root_or_mid) {
    if (narrowed) *narrowed = {lo, hi, iv.poly};
    return root_or_mid;
  };
  if (p.degree() == 1) {
    Rational r(-p.coeffs()[0], p.coeffs()[1]);
    r.canonicalize();
    lo = r - eps / 4;
    hi = r;
    return finish(r);
  }
  auto exact_candidate = [&]() -> std::optional<Rational> {
    Rational c = detail::simplest_between(lo, hi);
    if (c > lo && p.sign_at(c) == 0) return c;
    return std::nullopt;
  };
  if (auto c = exact_candidate()) {
    lo = *c - std::min(Rational(eps / 4), Rational((*c - lo) / 2));
    hi = *c;
    return finish(*c);
  }
  int s_hi = p.sign_at(hi);
  if (s_hi == 0) {
    lo = hi - std::min(Rational(eps / 2), Rational(hi - lo));
    return finish(hi);
  }
  while (hi - lo >= eps) {
    Rational mid = (lo + hi) / 2;
    int s = p.sign_at(mid);
    if (s == 0) {
      lo = mid - std::min(Rational(eps / 4), Rational((hi - lo) / 4));
      hi = mid;
      return finish(mid);
    }
    if (s == s_hi) hi = mid;
    else lo = mid;
  }
  if (auto c = exact_candidate()) return finish(*c);
  return finish((lo + hi) / 2);
}

inline double refine_root_double(const IsolatingInterval& iv, double eps = 1e-15) {
  Rational e(eps);
  return refine_root(iv, e).get_d();
}

}  // namespace cremona::algebra
