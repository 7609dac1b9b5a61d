#pragma once

#include <cctype>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "cremona/algebra/multipoly.hpp"

namespace cremona::algebra {

/// Canonical text: terms in descending graded-lex order, explicit `*` and `^`, variables in
/// table order inside a monomial, e.g. `3*dt^4 - 4`.
inline std::string to_string(const MultiPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    const bool negative = t.coeff < 0;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    Rational mag = abs(t.coeff);
    std::string mono;
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      if (t.mono[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += p.vars()->name(i);
      if (t.mono[i] > 1) mono += '^' + std::to_string(t.mono[i]);
    }
    if (mono.empty()) {
      out += to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += to_string(mag) + '*' + mono;
    }
  }
  return out;
}

/// Recursive-descent reader for polynomial expressions: `+ - * ^`, integer literals, `/` by a
/// non-zero constant, parentheses. Identifiers resolve to table variables first, then through
/// the optional constant resolver.
class ExpressionParser {
 public:
  using Resolver = std::function<std::optional<Rational>(std::string_view)>;

  ExpressionParser(std::string_view text, VarTablePtr vars, Resolver resolver = {}, std::size_t line = 1,
                   std::size_t column_offset = 0)
      : text_(text), vars_(std::move(vars)), resolver_(std::move(resolver)), line_(line), col0_(column_offset) {}

  MultiPoly parse() {
    MultiPoly p = expr();
    skip_blanks();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, col0_ + pos_ + 1); }

  void skip_blanks() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_blanks();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MultiPoly expr() {
    MultiPoly acc = term();
    for (;;) {
      if (accept('+')) acc = acc + term();
      else if (accept('-')) acc = acc - term();
      else return acc;
    }
  }

  MultiPoly term() {
    MultiPoly acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        auto where = pos_;
        MultiPoly d = unary();
        if (!d.is_constant() || d.is_zero()) {
          pos_ = where;
          fail("division is only allowed by a non-zero constant");
        }
        acc = (1 / d.constant_term()) * acc;
      } else {
        return acc;
      }
    }
  }

  MultiPoly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  MultiPoly power() {
    MultiPoly base = primary();
    if (accept('^')) {
      skip_blanks();
      auto start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be a non-negative integer literal");
      auto e = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (e > 65535) fail("exponent too large");
      return pow(base, static_cast<unsigned>(e));
    }
    return base;
  }

  MultiPoly primary() {
    skip_blanks();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '.') fail("decimal literals are not exact; write p/q");
      return MultiPoly::constant(vars_, Rational(Integer(std::string(text_.substr(start, pos_ - start)), 10)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      auto start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      auto name = text_.substr(start, pos_ - start);
      if (auto idx = vars_->index_of(name)) return MultiPoly::variable(vars_, *idx);
      if (resolver_) {
        if (auto value = resolver_(name)) return MultiPoly::constant(vars_, *value);
      }
      throw NameError("unknown identifier '" + std::string(name) + "' (line " + std::to_string(line_) +
                      ", column " + std::to_string(col0_ + start + 1) + ")");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  VarTablePtr vars_;
  Resolver resolver_;
  std::size_t line_;
  std::size_t col0_;
  std::size_t pos_ = 0;
};

/// Reads the canonical text format (or any expression of the same grammar).
inline MultiPoly parse_poly(std::string_view text, const VarTablePtr& vars) {
  return ExpressionParser(text, vars).parse();
}

}  // namespace cremona::algebra
