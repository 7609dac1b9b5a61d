#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cremona/algebra/multipoly.hpp"

namespace cremona::algebra {

/// Dense univariate polynomial with integer coefficients, low to high, no trailing zeros.
class UPolyZ {
 public:
  UPolyZ() = default;
  explicit UPolyZ(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }

  /// Integer multiple of a polynomial univariate in `var`.
  static UPolyZ from_multipoly(const MultiPoly& p, std::size_t var) {
    for (const auto& t : p.terms())
      for (std::size_t v = 0; v < t.mono.size(); ++v)
        if (v != var && t.mono[v] != 0) throw UsageError("polynomial is not univariate in the requested variable");
    const Integer scale = detail::denominator_lcm(p);
    std::vector<Integer> c(static_cast<std::size_t>(std::max<std::int64_t>(p.degree(var), 0)) + 1);
    for (const auto& t : p.terms()) c[t.mono[var]] = scale / t.coeff.get_den() * t.coeff.get_num();
    return UPolyZ(std::move(c));
  }

  MultiPoly to_multipoly(const VarTablePtr& vars, std::size_t var) const {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      Monomial m(vars->size());
      m[var] = static_cast<std::uint32_t>(i);
      terms.push_back({std::move(m), Rational(c_[i])});
    }
    return MultiPoly::from_terms(vars, std::move(terms));
  }

  const std::vector<Integer>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  const Integer& lead() const { return c_.back(); }
  bool operator==(const UPolyZ&) const = default;

  UPolyZ derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Integer> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long>(i);
    return UPolyZ(std::move(d));
  }

  Integer content() const {
    Integer g = 0;
    for (const auto& x : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
  }

  /// Divided by its positive content; the sign is kept.
  UPolyZ primitive() const {
    Integer g = content();
    if (g <= 1) return *this;
    std::vector<Integer> out(c_);
    for (auto& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return UPolyZ(std::move(out));
  }

  UPolyZ negated() const {
    std::vector<Integer> out(c_);
    for (auto& x : out) x = -x;
    return UPolyZ(std::move(out));
  }

  /// lc(b)^(deg a - deg b + 1) * a mod b.
  friend UPolyZ pseudo_remainder(const UPolyZ& a, const UPolyZ& b) {
    if (b.is_zero()) throw UsageError("pseudo-remainder by zero");
    std::vector<Integer> r = a.c_;
    const std::size_t db = b.c_.size() - 1;
    if (r.size() <= db) return a;
    std::size_t steps = r.size() - db;
    const Integer& lb = b.c_.back();
    while (r.size() > db) {
      const std::size_t shift = r.size() - 1 - db;
      const Integer lr = r.back();
      for (auto& x : r) x *= lb;
      for (std::size_t j = 0; j <= db; ++j) r[shift + j] -= lr * b.c_[j];
      r.pop_back();
      --steps;
      while (!r.empty() && r.back() == 0) r.pop_back();
    }
    if (steps > 0) {
      Integer f;
      mpz_pow_ui(f.get_mpz_t(), lb.get_mpz_t(), steps);
      for (auto& x : r) x *= f;
    }
    return UPolyZ(std::move(r));
  }

  /// Sign of p(num/den), den > 0.
  int sign_at(const Integer& num, const Integer& den) const {
    if (c_.empty()) return 0;
    // sum c_i num^i den^(n-i) by Horner in the homogeneous form
    Integer acc = c_.back();
    Integer dpow = 1;
    for (std::size_t i = c_.size() - 1; i-- > 0;) {
      dpow *= den;
      acc = acc * num + c_[i] * dpow;
    }
    return sgn(acc);
  }

  int sign_at(const Rational& x) const { return sign_at(x.get_num(), x.get_den()); }

  /// Sign as x -> +inf or -inf.
  int sign_at_infinity(bool positive) const {
    if (c_.empty()) return 0;
    int s = sgn(c_.back());
    return (positive || c_.size() % 2 == 1) ? s : -s;
  }

  Rational evaluate(const Rational& x) const {
    Rational acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  double evaluate(double x) const {
    double acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i].get_d();
    return acc;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Integer> c_;
};

}  // namespace cremona::algebra
