#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cremona/algebra/monomial.hpp"
#include "cremona/algebra/rational.hpp"
#include "cremona/algebra/vartable.hpp"
#include "cremona/errors.hpp"

namespace cremona::algebra {

struct Term {
  Monomial mono;
  Rational coeff;

  bool operator==(const Term&) const = default;
};

/// Sparse multivariate polynomial over Q. Terms are kept without zero coefficients, pairwise
/// distinct and sorted in descending graded-lex order; the zero polynomial has no terms.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(VarTablePtr vars) : vars_(std::move(vars)) {}

  static MultiPoly constant(VarTablePtr vars, const Rational& c) {
    MultiPoly p(std::move(vars));
    if (c != 0) p.terms_.push_back({Monomial(p.vars_->size()), c});
    return p;
  }

  static MultiPoly variable(VarTablePtr vars, std::size_t index, std::uint32_t exponent = 1) {
    if (index >= vars->size()) throw UsageError("variable index out of range");
    MultiPoly p(std::move(vars));
    Monomial m(p.vars_->size());
    m[index] = exponent;
    p.terms_.push_back({std::move(m), Rational(1)});
    return p;
  }

  static MultiPoly variable(const VarTablePtr& vars, std::string_view name) {
    return variable(vars, vars->require(name));
  }

  /// Builds a canonical polynomial from arbitrary (unsorted, repeated, zero) terms.
  static MultiPoly from_terms(VarTablePtr vars, std::vector<Term> terms) {
    MultiPoly p(std::move(vars));
    for (const auto& t : terms)
      if (t.mono.size() != p.vars_->size()) throw UsageError("monomial length does not match variable table");
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return grlex_compare(a.mono, b.mono) > 0; });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coeff += t.coeff;
        if (p.terms_.back().coeff == 0) p.terms_.pop_back();
      } else if (t.coeff != 0) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  /// Trusts the caller: terms already canonical.
  static MultiPoly from_sorted_terms(VarTablePtr vars, std::vector<Term> terms) {
    MultiPoly p(std::move(vars));
    p.terms_ = std::move(terms);
    return p;
  }

  const VarTablePtr& vars() const noexcept { return vars_; }
  std::size_t nvars() const noexcept { return vars_ ? vars_->size() : 0; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_constant()); }

  /// Precondition: non-zero.
  const Term& leading_term() const {
    if (terms_.empty()) throw UsageError("leading term of the zero polynomial");
    return terms_.front();
  }
  const Rational& leading_coeff() const { return leading_term().coeff; }

  Rational constant_term() const {
    if (!terms_.empty() && terms_.back().mono.is_constant()) return terms_.back().coeff;
    return Rational(0);
  }

  Rational coefficient(const Monomial& m) const {
    for (const auto& t : terms_)
      if (t.mono == m) return t.coeff;
    return Rational(0);
  }

  /// Total degree; -1 for the zero polynomial.
  std::int64_t total_degree() const noexcept {
    return terms_.empty() ? -1 : static_cast<std::int64_t>(terms_.front().mono.total_degree());
  }

  /// Degree in one variable; -1 for the zero polynomial.
  std::int64_t degree(std::size_t var) const {
    if (terms_.empty()) return -1;
    std::int64_t d = 0;
    for (const auto& t : terms_) d = std::max<std::int64_t>(d, t.mono[var]);
    return d;
  }

  /// Total degree counting only the listed variables; -1 for zero.
  std::int64_t degree_in(std::span<const std::size_t> vars) const {
    if (terms_.empty()) return -1;
    std::int64_t d = 0;
    for (const auto& t : terms_) {
      std::int64_t s = 0;
      for (auto v : vars) s += t.mono[v];
      d = std::max(d, s);
    }
    return d;
  }

  std::vector<std::uint32_t> degrees() const {
    std::vector<std::uint32_t> d(nvars(), 0);
    for (const auto& t : terms_)
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::max(d[i], t.mono[i]);
    return d;
  }

  /// Variables with a positive exponent somewhere.
  std::vector<std::size_t> support() const {
    auto d = degrees();
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] > 0) s.push_back(i);
    return s;
  }

  bool involves(std::size_t var) const { return degree(var) > 0; }

  /// True when no variable other than `var` occurs.
  bool is_univariate_in(std::size_t var) const {
    for (const auto& t : terms_)
      for (std::size_t i = 0; i < t.mono.size(); ++i)
        if (i != var && t.mono[i] != 0) return false;
    return true;
  }

  bool has_integer_coefficients() const {
    for (const auto& t : terms_)
      if (t.coeff.get_den() != 1) return false;
    return true;
  }

  bool operator==(const MultiPoly& o) const { return same_table(vars_, o.vars_) && terms_ == o.terms_; }

  MultiPoly operator-() const {
    MultiPoly r(*this);
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, false); }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, true); }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

  friend MultiPoly operator*(const Rational& c, const MultiPoly& p) {
    if (c == 0) return MultiPoly(p.vars_);
    MultiPoly r(p);
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
  }
  friend MultiPoly operator*(const MultiPoly& p, const Rational& c) { return c * p; }

  /// Multiplies by a monomial (exponents aligned with the table).
  MultiPoly shifted(const Monomial& m) const {
    MultiPoly r(*this);
    for (auto& t : r.terms_) t.mono = t.mono * m;
    return r;
  }

  MultiPoly derivative(std::size_t var) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (t.mono[var] == 0) continue;
      Term d{t.mono, t.coeff * t.mono[var]};
      d.mono[var] -= 1;
      out.push_back(std::move(d));
    }
    return from_terms(vars_, std::move(out));
  }

  /// Evaluates at a full point. Works for Rational and double (and anything with + * and a
  /// conversion from Rational through `convert`).
  template <class T, class Convert>
  T evaluate(std::span<const T> point, Convert convert) const {
    if (point.size() != nvars()) throw UsageError("evaluation point has wrong length");
    T acc = convert(Rational(0));
    std::vector<std::vector<T>> powers(point.size());
    for (const auto& t : terms_) {
      T v = convert(t.coeff);
      for (std::size_t i = 0; i < point.size(); ++i) {
        auto e = t.mono[i];
        if (e == 0) continue;
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(convert(Rational(1)));
        while (pw.size() <= e) pw.push_back(pw.back() * point[i]);
        v = v * pw[e];
      }
      acc = acc + v;
    }
    return acc;
  }

  Rational evaluate(std::span<const Rational> point) const {
    return evaluate<Rational>(point, [](const Rational& q) { return q; });
  }

  double evaluate(std::span<const double> point) const {
    return evaluate<double>(point, [](const Rational& q) { return q.get_d(); });
  }

  /// Same polynomial expressed on another table; every used variable must exist there by name.
  MultiPoly rebase(const VarTablePtr& target) const {
    if (same_table(vars_, target)) {
      MultiPoly r(*this);
      r.vars_ = target;
      return r;
    }
    auto used = support();
    std::vector<std::size_t> map(nvars(), 0);
    for (auto v : used) map[v] = target->require(vars_->name(v));
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      Monomial m(target->size());
      for (auto v : used) m[map[v]] = t.mono[v];
      out.push_back({std::move(m), t.coeff});
    }
    return from_terms(target, std::move(out));
  }

 private:
  static MultiPoly merge(const MultiPoly& a, const MultiPoly& b, bool subtract) {
    require_same_table(a.vars_, b.vars_);
    MultiPoly r(a.vars_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      int c;
      if (i == a.terms_.size()) c = -1;
      else if (j == b.terms_.size()) c = 1;
      else c = grlex_compare(a.terms_[i].mono, b.terms_[j].mono);
      if (c > 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        Term t = b.terms_[j++];
        if (subtract) t.coeff = -t.coeff;
        r.terms_.push_back(std::move(t));
      } else {
        Rational s = subtract ? Rational(a.terms_[i].coeff - b.terms_[j].coeff)
                              : Rational(a.terms_[i].coeff + b.terms_[j].coeff);
        if (s != 0) r.terms_.push_back({a.terms_[i].mono, std::move(s)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  VarTablePtr vars_;
  std::vector<Term> terms_;
};

namespace detail {

/// lcm of the coefficient denominators.
inline Integer denominator_lcm(const MultiPoly& p) {
  Integer l = 1;
  for (const auto& t : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  return l;
}

/// Coefficients multiplied by `scale`, which must clear every denominator.
inline std::vector<Integer> scaled_numerators(const MultiPoly& p, const Integer& scale) {
  std::vector<Integer> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    Integer v = scale / t.coeff.get_den();
    out.push_back(v * t.coeff.get_num());
  }
  return out;
}

/// Mixed-radix (Kronecker) layout of a box of exponent vectors.
struct Box {
  std::vector<std::uint64_t> extent;  // bound + 1 per variable
  std::vector<std::uint64_t> stride;
  std::uint64_t volume = 1;
  bool fits = true;  // volume representable in 64 bits

  explicit Box(const std::vector<std::uint32_t>& bounds) {
    const std::size_t n = bounds.size();
    extent.resize(n);
    stride.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) extent[i] = std::uint64_t(bounds[i]) + 1;
    for (std::size_t k = n; k-- > 0;) {
      stride[k] = volume;
      if (volume > std::numeric_limits<std::uint64_t>::max() / extent[k]) {
        fits = false;
        return;
      }
      volume *= extent[k];
    }
  }

  std::uint64_t index(const Monomial& m) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < stride.size(); ++i) idx += m[i] * stride[i];
    return idx;
  }

  Monomial monomial(std::uint64_t idx) const {
    Monomial m(stride.size());
    for (std::size_t i = 0; i < stride.size(); ++i) {
      m[i] = static_cast<std::uint32_t>(idx / stride[i]);
      idx %= stride[i];
    }
    return m;
  }
};

inline constexpr std::uint64_t kDenseProductLimit = std::uint64_t(1) << 22;

/// Reference product: term-by-term into an ordered map. Used when no Kronecker layout fits.
inline MultiPoly multiply_generic(const MultiPoly& a, const MultiPoly& b) {
  std::map<Monomial, Rational, GrlexDescending> acc;
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) acc[ta.mono * tb.mono] += ta.coeff * tb.coeff;
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) out.push_back({m, c});
  return MultiPoly::from_sorted_terms(a.vars(), std::move(out));
}

}  // namespace detail

inline MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  require_same_table(a.vars(), b.vars());
  if (a.is_zero() || b.is_zero()) return MultiPoly(a.vars());
  auto da = a.degrees();
  auto db = b.degrees();
  std::vector<std::uint32_t> bounds(da.size());
  for (std::size_t i = 0; i < da.size(); ++i) bounds[i] = da[i] + db[i];
  detail::Box box(bounds);
  if (!box.fits) return detail::multiply_generic(a, b);

  const Integer sa = detail::denominator_lcm(a);
  const Integer sb = detail::denominator_lcm(b);
  const auto za = detail::scaled_numerators(a, sa);
  const auto zb = detail::scaled_numerators(b, sb);
  std::vector<std::uint64_t> ia(a.size()), ib(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ia[i] = box.index(a.terms()[i].mono);
  for (std::size_t j = 0; j < b.size(); ++j) ib[j] = box.index(b.terms()[j].mono);
  const Integer scale = sa * sb;

  std::vector<Term> out;
  const double pairs = double(a.size()) * double(b.size());
  if (box.volume <= detail::kDenseProductLimit && double(box.volume) <= 16.0 * pairs + 4096.0) {
    std::vector<Integer> acc(box.volume);
    for (std::size_t i = 0; i < za.size(); ++i)
      for (std::size_t j = 0; j < zb.size(); ++j)
        mpz_addmul(acc[ia[i] + ib[j]].get_mpz_t(), za[i].get_mpz_t(), zb[j].get_mpz_t());
    for (std::uint64_t k = 0; k < box.volume; ++k) {
      if (acc[k] == 0) continue;
      out.push_back({box.monomial(k), make_rational(acc[k], scale)});
    }
  } else {
    std::unordered_map<std::uint64_t, Integer> acc;
    acc.reserve(std::min<std::size_t>(static_cast<std::size_t>(pairs), 1u << 24));
    for (std::size_t i = 0; i < za.size(); ++i)
      for (std::size_t j = 0; j < zb.size(); ++j)
        mpz_addmul(acc[ia[i] + ib[j]].get_mpz_t(), za[i].get_mpz_t(), zb[j].get_mpz_t());
    out.reserve(acc.size());
    for (auto& [k, v] : acc) {
      if (v == 0) continue;
      out.push_back({box.monomial(k), make_rational(v, scale)});
    }
  }
  std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return grlex_compare(x.mono, y.mono) > 0; });
  return MultiPoly::from_sorted_terms(a.vars(), std::move(out));
}

inline MultiPoly pow(const MultiPoly& base, unsigned exponent) {
  MultiPoly result = MultiPoly::constant(base.vars(), Rational(1));
  MultiPoly b = base;
  while (exponent > 0) {
    if (exponent & 1u) result = result * b;
    exponent >>= 1u;
    if (exponent) b = b * b;
  }
  return result;
}

/// Rational c with p = c * q, q having coprime integer coefficients and positive leading
/// coefficient. Zero for the zero polynomial.
inline Rational content(const MultiPoly& p) {
  if (p.is_zero()) return Rational(0);
  Integer num = 0;
  Integer den = 1;
  for (const auto& t : p.terms()) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  Rational c = make_rational(num, den);
  if (p.leading_coeff() < 0) c = -c;
  return c;
}

inline MultiPoly primitive_part(const MultiPoly& p) {
  if (p.is_zero()) return p;
  Rational c = content(p);
  if (c == 1) return p;
  Rational inv = 1 / c;
  return inv * p;
}

}  // namespace cremona::algebra
