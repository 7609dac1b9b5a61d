#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "cremona/errors.hpp"

namespace cremona::algebra {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw UsageError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p", "-p" or "p/q" (optional surrounding blanks). Decimal points are rejected so
/// that exact pipelines never see a rounded value.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [&](std::string_view s, bool allow_sign) {
    s = trim(s);
    std::size_t i = 0;
    if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) throw UsageError("malformed rational '" + std::string(text) + "'");
    for (std::size_t j = i; j < s.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(s[j])))
        throw UsageError("malformed rational '" + std::string(text) +
                         "' (exact p/q expected, e.g. 1/2)");
    }
    std::string digits(s);
    if (!digits.empty() && digits.front() == '+') digits.erase(0, 1);
    return Integer(digits, 10);
  };
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text, true));
  return make_rational(parse_int(text.substr(0, slash), true), parse_int(text.substr(slash + 1), false));
}

inline std::string to_string(const Integer& z) { return z.get_str(); }

/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline int sign(const Rational& q) { return sgn(q); }
inline int sign(const Integer& z) { return sgn(z); }

inline std::size_t bit_size(const Rational& q) {
  return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

/// Exact rational value of a finite double.
inline Rational from_double(double v) { return Rational(v); }

}  // namespace cremona::algebra
