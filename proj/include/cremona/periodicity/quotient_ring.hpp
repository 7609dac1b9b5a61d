#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cremona/algebra/multipoly.hpp"

namespace cremona::periodicity {

using algebra::Rational;

/// Dense univariate polynomials over Q, low to high, no trailing zeros.
namespace qpoly {

using Poly = std::vector<Rational>;

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline long deg(const Poly& p) { return static_cast<long>(p.size()) - 1; }

inline Poly add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

inline Poly scale(const Poly& a, const Rational& c) {
  if (c == 0) return {};
  Poly r(a);
  for (auto& v : r) v *= c;
  return r;
}

inline Poly sub(const Poly& a, const Poly& b) { return add(a, scale(b, Rational(-1))); }

inline Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

/// (quotient, remainder) of a by nonzero b.
inline std::pair<Poly, Poly> divrem(Poly a, const Poly& b) {
  if (b.empty()) throw SingularError("polynomial division by zero");
  Poly q;
  if (deg(a) >= deg(b)) q.assign(a.size() - b.size() + 1, Rational(0));
  const Rational inv = 1 / b.back();
  while (!a.empty() && deg(a) >= deg(b)) {
    const std::size_t shift = a.size() - b.size();
    const Rational c = a.back() * inv;
    q[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    trim(a);
  }
  trim(q);
  return {std::move(q), std::move(a)};
}

/// Inverse of a modulo m, or nullopt when gcd(a, m) is not constant.
inline std::optional<Poly> inverse_mod(const Poly& a, const Poly& m) {
  Poly r0 = m, r1 = divrem(a, m).second;
  Poly s0, s1{Rational(1)};
  while (!r1.empty()) {
    auto [q, r] = divrem(r0, r1);
    Poly s = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (deg(r0) != 0) return std::nullopt;
  return scale(s0, 1 / r0[0]);
}

inline Poly from_multipoly(const algebra::MultiPoly& p, std::size_t var) {
  Poly r(static_cast<std::size_t>(std::max<std::int64_t>(p.degree(var), -1) + 1));
  for (const auto& t : p.terms()) r[t.mono[var]] += t.coeff;
  trim(r);
  return r;
}

}  // namespace qpoly

/// Element of Q[dt]/(g). Constants built from a Rational carry no modulus and adopt the modulus
/// of the other operand; arithmetic between two reduced elements requires the same modulus.
class QuotientElem {
 public:
  QuotientElem() = default;
  QuotientElem(const Rational& c) {
    if (c != 0) p_.push_back(c);
  }
  QuotientElem(qpoly::Poly p, std::shared_ptr<const qpoly::Poly> modulus) : p_(std::move(p)), mod_(std::move(modulus)) {
    reduce();
  }

  const qpoly::Poly& poly() const noexcept { return p_; }
  bool is_zero() const noexcept { return p_.empty(); }

  friend bool operator==(const QuotientElem& a, const QuotientElem& b) { return a.p_ == b.p_; }

  friend QuotientElem operator+(const QuotientElem& a, const QuotientElem& b) {
    return {qpoly::add(a.p_, b.p_), pick(a, b)};
  }
  friend QuotientElem operator-(const QuotientElem& a, const QuotientElem& b) {
    return {qpoly::sub(a.p_, b.p_), pick(a, b)};
  }
  friend QuotientElem operator*(const QuotientElem& a, const QuotientElem& b) {
    return {qpoly::mul(a.p_, b.p_), pick(a, b)};
  }
  /// Throws SingularError when b is a zero divisor.
  friend QuotientElem operator/(const QuotientElem& a, const QuotientElem& b) {
    auto mod = pick(a, b);
    if (b.p_.empty()) throw SingularError("division by zero in the quotient ring");
    if (!mod) return {qpoly::scale(a.p_, 1 / b.p_[0]), nullptr};
    auto inv = qpoly::inverse_mod(b.p_, *mod);
    if (!inv) throw SingularError("division by a zero divisor in the quotient ring");
    return {qpoly::mul(a.p_, *inv), mod};
  }
  QuotientElem& operator+=(const QuotientElem& o) { return *this = *this + o; }
  QuotientElem& operator-=(const QuotientElem& o) { return *this = *this - o; }
  QuotientElem& operator*=(const QuotientElem& o) { return *this = *this * o; }

 private:
  static std::shared_ptr<const qpoly::Poly> pick(const QuotientElem& a, const QuotientElem& b) {
    if (a.mod_ && b.mod_ && a.mod_ != b.mod_ && *a.mod_ != *b.mod_)
      throw UsageError("quotient ring elements with different moduli");
    return a.mod_ ? a.mod_ : b.mod_;
  }
  void reduce() {
    if (mod_ && qpoly::deg(p_) >= qpoly::deg(*mod_)) p_ = qpoly::divrem(std::move(p_), *mod_).second;
  }

  qpoly::Poly p_;
  std::shared_ptr<const qpoly::Poly> mod_;
};

}  // namespace cremona::periodicity
