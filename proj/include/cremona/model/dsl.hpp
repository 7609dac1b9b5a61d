#pragma once

// Line-oriented model language:
//   var x, y
//   param a = 1/2
//   x' = y
//   y' = 6*x^2 - a
// `#` starts a comment. Parameters must be declared before use.

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cremona/algebra/text.hpp"
#include "cremona/model/quad_system.hpp"

namespace cremona::model {

namespace detail {

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Cursor {
  std::string_view text;
  std::size_t line;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool at_end() {
    skip();
    return pos >= text.size();
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line, pos + 1); }
  std::string ident() {
    skip();
    if (pos >= text.size() || !is_ident_start(text[pos])) fail("expected a name");
    auto start = pos;
    while (pos < text.size() && is_ident_char(text[pos])) ++pos;
    return std::string(text.substr(start, pos - start));
  }
  void expect(char c) {
    skip();
    if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  bool accept_word(std::string_view w) {
    skip();
    if (text.substr(pos, w.size()) != w) return false;
    auto after = pos + w.size();
    if (after < text.size() && is_ident_char(text[after])) return false;
    pos = after;
    return true;
  }
};

inline bool reserved(const std::string& name) { return name == "var" || name == "param" || name == "dt"; }

}  // namespace detail

inline QuadSystem parse_system(std::string_view source) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, Rational>> params;
  std::map<std::string, std::pair<std::string, std::size_t>> equations;  // name -> (rhs text, line)
  std::map<std::string, std::size_t> rhs_column;
  std::vector<std::pair<std::string, std::size_t>> order;

  auto known = [&](const std::string& n) {
    if (std::find(names.begin(), names.end(), n) != names.end()) return true;
    for (const auto& [p, v] : params)
      if (p == n) return true;
    return false;
  };

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= source.size()) {
    auto end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    detail::Cursor cur{line, line_no};
    if (cur.at_end()) continue;

    if (cur.accept_word("var")) {
      do {
        std::string n = cur.ident();
        if (detail::reserved(n)) cur.fail("'" + n + "' is reserved");
        if (known(n)) cur.fail("duplicate name '" + n + "'");
        names.push_back(n);
        cur.skip();
      } while (cur.pos < line.size() && line[cur.pos] == ',' && (++cur.pos, true));
      if (!cur.at_end()) cur.fail("unexpected text after variable list");
      continue;
    }
    if (cur.accept_word("param")) {
      std::string n = cur.ident();
      if (detail::reserved(n)) cur.fail("'" + n + "' is reserved");
      if (known(n)) cur.fail("duplicate name '" + n + "'");
      cur.expect('=');
      cur.skip();
      auto vstart = cur.pos;
      Rational value;
      try {
        std::string_view raw = line.substr(vstart);
        while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
        value = algebra::parse_rational(raw);
      } catch (const UsageError& e) {
        throw ParseError(std::string("invalid rational parameter value: ") + e.what(), line_no, vstart + 1);
      }
      params.emplace_back(n, value);
      continue;
    }
    std::string n = cur.ident();
    cur.expect('\'');
    cur.expect('=');
    if (std::find(names.begin(), names.end(), n) == names.end()) {
      throw NameError("equation for undeclared state variable '" + n + "' (line " + std::to_string(line_no) + ")");
    }
    if (equations.count(n)) cur.fail("second equation for '" + n + "'");
    cur.skip();
    equations[n] = {std::string(line.substr(cur.pos)), line_no};
    rhs_column[n] = cur.pos;
    order.emplace_back(n, line_no);
  }

  if (names.empty()) throw ParseError("no 'var' declaration", 1, 1);
  auto table = algebra::make_vartable(names);
  std::map<std::string, Rational, std::less<>> param_map(params.begin(), params.end());
  auto resolver = [&](std::string_view id) -> std::optional<Rational> {
    auto it = param_map.find(id);
    if (it == param_map.end()) return std::nullopt;
    return it->second;
  };
  std::vector<MultiPoly> rhs;
  for (const auto& n : names) {
    auto it = equations.find(n);
    if (it == equations.end()) throw ParseError("missing equation for '" + n + "'", line_no, 1);
    const auto& [text, ln] = it->second;
    MultiPoly f = algebra::ExpressionParser(text, table, resolver, ln, rhs_column[n]).parse();
    if (f.total_degree() > 2) {
      throw DegreeError("right-hand side of " + n + "' has degree " + std::to_string(f.total_degree()) +
                        " (line " + std::to_string(ln) + "); only quadratic systems are supported");
    }
    rhs.push_back(std::move(f));
  }
  return QuadSystem::from_polynomials(names, params, rhs);
}

/// Source text that parses back to an equal system.
inline std::string print_system(const QuadSystem& sys) {
  std::ostringstream out;
  out << "var ";
  for (std::size_t i = 0; i < sys.dimension(); ++i) out << (i ? ", " : "") << sys.state_names()[i];
  out << '\n';
  for (const auto& [name, value] : sys.params()) out << "param " << name << " = " << algebra::to_string(value) << '\n';
  for (std::size_t i = 0; i < sys.dimension(); ++i)
    out << sys.state_names()[i] << "' = " << algebra::to_string(sys.rhs_poly(i)) << '\n';
  return out.str();
}

}  // namespace cremona::model
