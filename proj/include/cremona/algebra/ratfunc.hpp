#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cremona/algebra/gcd.hpp"
#include "cremona/algebra/text.hpp"

namespace cremona::algebra {

namespace detail {

/// Scales num and den by one rational so both have coprime integer coefficients jointly and
/// den has a positive leading coefficient.
inline void joint_normalize(MultiPoly& num, MultiPoly& den) {
  Integer g = 0;
  Integer l = 1;
  for (const MultiPoly* p : {&num, &den})
    for (const auto& t : p->terms()) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
    }
  Rational k = make_rational(l, g);
  if (den.leading_coeff() < 0) k = -k;
  if (k != 1) {
    num = k * num;
    den = k * den;
  }
}

}  // namespace detail

/// Rational function num/den in canonical form: gcd(num, den) is a unit, coefficients are
/// integers with joint content 1 and den has a positive graded-lex leading coefficient.
class RatFunc {
 public:
  RatFunc() = default;

  explicit RatFunc(MultiPoly p) : num_(std::move(p)), den_(MultiPoly::constant(num_.vars(), Rational(1))) {
    detail::joint_normalize(num_, den_);
  }

  RatFunc(const MultiPoly& num, const MultiPoly& den) {
    require_same_table(num.vars(), den.vars());
    if (den.is_zero()) throw ExceptionalLocusError("rational function with zero denominator");
    if (num.is_zero()) {
      num_ = num;
      den_ = MultiPoly::constant(num.vars(), Rational(1));
      return;
    }
    auto r = gcd_cofactors(num, den);
    num_ = std::move(r.cofactor_a);
    den_ = std::move(r.cofactor_b);
    detail::joint_normalize(num_, den_);
  }

  /// num/den already coprime; only the scaling is normalized.
  static RatFunc from_coprime(MultiPoly num, MultiPoly den) {
    if (den.is_zero()) throw ExceptionalLocusError("rational function with zero denominator");
    RatFunc r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    if (r.num_.is_zero()) r.den_ = MultiPoly::constant(r.den_.vars(), Rational(1));
    else detail::joint_normalize(r.num_, r.den_);
    return r;
  }

  static RatFunc constant(const VarTablePtr& vars, const Rational& c) {
    return RatFunc(MultiPoly::constant(vars, c));
  }

  const MultiPoly& numer() const noexcept { return num_; }
  const MultiPoly& denom() const noexcept { return den_; }
  const VarTablePtr& vars() const noexcept { return num_.vars(); }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.is_constant(); }

  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

  RatFunc operator-() const { return from_coprime(-num_, den_); }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    // cross cancellation keeps the operands small
    auto g1 = gcd_cofactors(a.num_, b.den_);
    auto g2 = gcd_cofactors(b.num_, a.den_);
    return from_coprime(g1.cofactor_a * g2.cofactor_a, g2.cofactor_b * g1.cofactor_b);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw ExceptionalLocusError("division by the zero rational function");
    return a * from_coprime(b.den_, b.num_);
  }

  Rational evaluate(std::span<const Rational> point) const {
    Rational d = den_.evaluate(point);
    if (d == 0) throw ExceptionalLocusError("denominator vanishes at the evaluation point");
    return num_.evaluate(point) / d;
  }

  double evaluate(std::span<const double> point) const { return num_.evaluate(point) / den_.evaluate(point); }

 private:
  MultiPoly num_;
  MultiPoly den_;
};

inline std::string to_string(const RatFunc& f) {
  if (f.denom().is_constant() && f.denom().leading_coeff() == 1) return to_string(f.numer());
  return "(" + to_string(f.numer()) + ")/(" + to_string(f.denom()) + ")";
}

/// Variable index -> value. Variables not listed are left alone.
using Assignment = std::map<std::size_t, RatFunc>;

inline Assignment make_assignment(const VarTablePtr& vars, const std::map<std::string, Rational>& values) {
  Assignment a;
  for (const auto& [name, v] : values) a.emplace(vars->require(name), RatFunc::constant(vars, v));
  return a;
}

namespace detail {

/// Substitutes rational constants for variables.
inline MultiPoly substitute_constants(const MultiPoly& p, const std::vector<std::pair<std::size_t, Rational>>& values) {
  if (values.empty()) return p;
  std::vector<Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    Term r = t;
    for (const auto& [v, c] : values) {
      if (r.mono[v] == 0) continue;
      Rational f;
      mpz_pow_ui(f.get_num_mpz_t(), c.get_num_mpz_t(), r.mono[v]);
      mpz_pow_ui(f.get_den_mpz_t(), c.get_den_mpz_t(), r.mono[v]);
      r.coeff *= f;
      r.mono[v] = 0;
    }
    if (r.coeff != 0) terms.push_back(std::move(r));
  }
  return MultiPoly::from_terms(p.vars(), std::move(terms));
}

struct PowerCache {
  MultiPoly base;
  std::vector<MultiPoly> powers;

  const MultiPoly& get(std::size_t k) {
    if (powers.empty()) powers.push_back(MultiPoly::constant(base.vars(), Rational(1)));
    while (powers.size() <= k) powers.push_back(powers.back() * base);
    return powers[k];
  }
};

/// p(n_v / d_v) * prod d_v^{deg_v p}, a polynomial. Groups terms by the exponents of the
/// substituted variables so each power product is formed once.
inline MultiPoly substitute_homogenized(const MultiPoly& p, const std::vector<std::size_t>& vars,
                                        std::vector<PowerCache>& nums, std::vector<PowerCache>& dens,
                                        const std::vector<std::uint32_t>& degs) {
  std::map<std::vector<std::uint32_t>, std::vector<Term>> groups;
  for (const auto& t : p.terms()) {
    std::vector<std::uint32_t> key(vars.size());
    Term rest = t;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      key[i] = t.mono[vars[i]];
      rest.mono[vars[i]] = 0;
    }
    groups[key].push_back(std::move(rest));
  }
  MultiPoly out(p.vars());
  for (auto& [key, terms] : groups) {
    MultiPoly acc = MultiPoly::from_terms(p.vars(), std::move(terms));
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (key[i] > 0) acc = acc * nums[i].get(key[i]);
      if (degs[i] > key[i]) acc = acc * dens[i].get(degs[i] - key[i]);
    }
    out += acc;
  }
  return out;
}

}  // namespace detail

/// Simultaneous substitution; result in canonical form.
inline RatFunc subst(const RatFunc& f, const Assignment& assignment) {
  if (assignment.empty()) return f;
  std::vector<std::pair<std::size_t, Rational>> constants;
  std::vector<std::size_t> vars;
  std::vector<detail::PowerCache> nums, dens;
  for (const auto& [v, value] : assignment) {
    if (v >= f.vars()->size()) throw UsageError("substitution target out of range");
    require_same_table(f.vars(), value.vars());
    if (value.is_polynomial() && value.numer().is_constant()) {
      Rational c = value.is_zero() ? Rational(0) : Rational(value.numer().leading_coeff() / value.denom().leading_coeff());
      constants.emplace_back(v, c);
    } else {
      vars.push_back(v);
      nums.push_back({value.numer(), {}});
      dens.push_back({value.denom(), {}});
    }
  }
  MultiPoly num = detail::substitute_constants(f.numer(), constants);
  MultiPoly den = detail::substitute_constants(f.denom(), constants);
  if (den.is_zero()) throw ExceptionalLocusError("denominator vanishes identically after substitution");
  if (vars.empty()) return RatFunc(num, den);

  std::vector<std::uint32_t> dn(vars.size()), dd(vars.size()), common(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    dn[i] = static_cast<std::uint32_t>(std::max<std::int64_t>(num.degree(vars[i]), 0));
    dd[i] = static_cast<std::uint32_t>(std::max<std::int64_t>(den.degree(vars[i]), 0));
    common[i] = std::max(dn[i], dd[i]);
  }
  // Both sides homogenized to the same powers of every d_v, which then cancel.
  MultiPoly n2 = detail::substitute_homogenized(num, vars, nums, dens, common);
  MultiPoly d2 = detail::substitute_homogenized(den, vars, nums, dens, common);
  if (d2.is_zero()) throw ExceptionalLocusError("denominator vanishes identically after substitution");
  return RatFunc(n2, d2);
}

/// Homogenized composition over a shared denominator: for p of total degree at most `degree`
/// in the variables `vars`, returns p(a_1/q, ..., a_k/q) * q^degree.
inline MultiPoly compose_homogeneous(const MultiPoly& p, const std::vector<std::size_t>& vars,
                                     std::span<const MultiPoly> a, const MultiPoly& q, std::uint32_t degree) {
  if (a.size() != vars.size()) throw UsageError("composition arity mismatch");
  std::vector<detail::PowerCache> nums;
  for (const auto& x : a) nums.push_back({x, {}});
  detail::PowerCache qpow{q, {}};
  std::map<std::vector<std::uint32_t>, std::vector<Term>> groups;
  for (const auto& t : p.terms()) {
    std::vector<std::uint32_t> key(vars.size());
    Term rest = t;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      key[i] = t.mono[vars[i]];
      rest.mono[vars[i]] = 0;
    }
    groups[key].push_back(std::move(rest));
  }
  MultiPoly out(p.vars());
  for (auto& [key, terms] : groups) {
    std::uint32_t total = 0;
    MultiPoly acc = MultiPoly::from_terms(p.vars(), std::move(terms));
    for (std::size_t i = 0; i < vars.size(); ++i) {
      total += key[i];
      if (key[i] > 0) acc = acc * nums[i].get(key[i]);
    }
    if (total > degree) throw UsageError("polynomial exceeds the homogenization degree");
    if (total < degree) acc = acc * qpow.get(degree - total);
    out += acc;
  }
  return out;
}

}  // namespace cremona::algebra
