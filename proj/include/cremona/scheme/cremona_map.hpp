#pragma once

#include <array>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cremona/algebra/bareiss.hpp"
#include "cremona/algebra/ratfunc.hpp"
#include "cremona/scheme/polarize.hpp"
#include "cremona/scheme/step.hpp"

namespace cremona::scheme {

using algebra::RatFunc;

/// The step map x -> x_hat of a polarized scheme as rational functions of (x, dt).
/// x_hat_i = numerators[i] / denominator, with denominator = det(I - dt (L(x) + B/2)),
/// which equals 1 at dt = 0. components[i] is the same quotient in lowest terms.
class CremonaMap {
 public:
  CremonaMap(std::shared_ptr<const PolarizedScheme> scheme, VarTablePtr table, std::vector<MultiPoly> numerators,
             MultiPoly denominator)
      : scheme_(std::move(scheme)), table_(std::move(table)), num_(std::move(numerators)), den_(std::move(denominator)) {
    for (const auto& p : num_) comps_.emplace_back(p, den_);
  }

  const PolarizedScheme& scheme() const noexcept { return *scheme_; }
  const std::shared_ptr<const PolarizedScheme>& scheme_ptr() const noexcept { return scheme_; }
  const QuadSystem& system() const noexcept { return scheme_->system(); }
  std::size_t dimension() const noexcept { return num_.size(); }
  /// Variables x_1..x_m, dt.
  const VarTablePtr& table() const noexcept { return table_; }
  std::size_t dt_index() const noexcept { return dimension(); }
  const std::vector<MultiPoly>& numerators() const noexcept { return num_; }
  const MultiPoly& denominator() const noexcept { return den_; }
  const std::vector<RatFunc>& components() const noexcept { return comps_; }

  /// Largest total degree in the state variables among the numerators and the denominator.
  std::uint32_t state_degree() const {
    std::vector<std::size_t> state(dimension());
    for (std::size_t i = 0; i < state.size(); ++i) state[i] = i;
    std::int64_t d = den_.degree_in(state);
    for (const auto& p : num_) d = std::max(d, p.degree_in(state));
    return static_cast<std::uint32_t>(std::max<std::int64_t>(d, 0));
  }

 private:
  std::shared_ptr<const PolarizedScheme> scheme_;
  VarTablePtr table_;
  std::vector<MultiPoly> num_;
  MultiPoly den_;
  std::vector<RatFunc> comps_;
};

inline VarTablePtr map_table(const QuadSystem& sys) {
  auto names = sys.state_names();
  names.push_back("dt");
  return algebra::make_vartable(names);
}

/// Solves the jointly linear step equations symbolically by fraction-free elimination.
inline CremonaMap build_map(const PolarizedScheme& scheme) {
  if (!scheme.birational())
    throw UsageError("NonBirationalWarning: the literal scheme with cross terms has no rational step map");
  const QuadSystem& sys = scheme.system();
  const std::size_t m = sys.dimension();
  auto table = map_table(sys);
  Coefficients<Rational> coeffs(sys);
  auto var = [&](std::size_t j) { return MultiPoly::variable(table, j); };
  const MultiPoly dt = MultiPoly::variable(table, m);
  const MultiPoly one = MultiPoly::constant(table, Rational(1));

  algebra::PolyMatrix a(m, std::vector<MultiPoly>(m, MultiPoly(table)));
  std::vector<MultiPoly> rhs(m, MultiPoly(table));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& f = sys.component(i);
    MultiPoly lin = MultiPoly::constant(table, f.c);
    for (std::size_t j = 0; j < m; ++j) lin += (f.b[j] / 2) * var(j);
    rhs[i] = var(i) + dt * lin;
    for (std::size_t k = 0; k < m; ++k) {
      MultiPoly coef = MultiPoly::constant(table, Rational(f.b[k] / 2));
      for (std::size_t j = 0; j < m; ++j)
        if (f.q[j][k] != 0) coef += f.q[j][k] * var(j);
      a[i][k] = (i == k ? one : MultiPoly(table)) - dt * coef;
    }
  }
  auto sol = algebra::bareiss_eliminate(a, rhs);
  // normalize so the denominator is 1 at dt = 0
  Rational at0 = algebra::detail::substitute_constants(sol.det, {{m, Rational(0)}}).constant_term();
  if (at0 != 1) {
    Rational s = 1 / at0;
    sol.det = s * sol.det;
    for (auto& p : sol.numerators) p = s * p;
  }
  return CremonaMap(std::make_shared<const PolarizedScheme>(scheme), table, std::move(sol.numerators),
                    std::move(sol.det));
}

inline MultiPoly negate_dt(const MultiPoly& p, std::size_t dt_index) {
  std::vector<algebra::Term> terms;
  for (const auto& t : p.terms()) terms.push_back({t.mono, t.mono[dt_index] % 2 ? Rational(-t.coeff) : t.coeff});
  return MultiPoly::from_sorted_terms(p.vars(), std::move(terms));
}

/// The step map with dt replaced by -dt, which is the inverse map.
inline CremonaMap invert_map(const CremonaMap& map) {
  std::vector<MultiPoly> num;
  for (const auto& p : map.numerators()) num.push_back(negate_dt(p, map.dt_index()));
  return CremonaMap(map.scheme_ptr(), map.table(), std::move(num), negate_dt(map.denominator(), map.dt_index()));
}

/// Componentwise composition outer(inner(x, dt), dt) as reduced rational functions.
inline std::vector<RatFunc> compose(const std::vector<RatFunc>& outer, const std::vector<RatFunc>& inner) {
  algebra::Assignment asg;
  for (std::size_t i = 0; i < inner.size(); ++i) asg.emplace(i, inner[i]);
  std::vector<RatFunc> out;
  for (const auto& f : outer) out.push_back(algebra::subst(f, asg));
  return out;
}

/// Exact image of x under C(dt); evaluates the symbolic map.
inline std::vector<Rational> eval_map_exact(const CremonaMap& map, std::span<const Rational> x, const Rational& dt) {
  if (x.size() != map.dimension()) throw UsageError("state length does not match the map dimension");
  std::vector<Rational> point(x.begin(), x.end());
  point.push_back(dt);
  const Rational d = map.denominator().evaluate(point);
  if (d == 0) throw ExceptionalLocusError("the step denominator vanishes at this state");
  std::vector<Rational> out;
  for (const auto& p : map.numerators()) out.push_back(p.evaluate(point) / d);
  return out;
}

inline std::vector<Rational> eval_map_exact(const CremonaMap& map, const std::vector<Rational>& x, const Rational& dt) {
  return eval_map_exact(map, std::span<const Rational>(x), dt);
}

/// For a one-dimensional map x_hat = (alpha x + beta) / (gamma x + delta), the matrix
/// [[alpha, beta], [gamma, delta]] with entries polynomial in dt.
inline std::array<std::array<MultiPoly, 2>, 2> mobius_matrix(const CremonaMap& map) {
  if (map.dimension() != 1) throw UsageError("a Moebius matrix exists only for one-dimensional maps");
  auto split = [&](const MultiPoly& p) {
    std::vector<algebra::Term> lin, con;
    for (const auto& t : p.terms()) {
      if (t.mono[0] > 1) throw UsageError("map is not linear fractional in x");
      algebra::Monomial m = t.mono;
      m[0] = 0;
      (t.mono[0] == 1 ? lin : con).push_back({m, t.coeff});
    }
    return std::array<MultiPoly, 2>{MultiPoly::from_terms(p.vars(), lin), MultiPoly::from_terms(p.vars(), con)};
  };
  return {split(map.numerators()[0]), split(map.denominator())};
}

// ---------------------------------------------------------------------------------------
// Text form: one line per component, `<name>hat = <numer> / <denom>`.

inline std::string print_map(const CremonaMap& map) {
  std::ostringstream out;
  const auto& names = map.system().state_names();
  for (std::size_t i = 0; i < map.dimension(); ++i) {
    const auto& c = map.components()[i];
    out << names[i] << "hat = " << algebra::to_string(c.numer()) << " / " << algebra::to_string(c.denom()) << '\n';
  }
  return out.str();
}

/// Reads the text form back into reduced components over `table` (x_1..x_m, dt).
inline std::vector<RatFunc> parse_map(std::string_view text, const VarTablePtr& table,
                                      const std::vector<std::string>& state_names) {
  std::vector<std::optional<RatFunc>> comps(state_names.size());
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected '<name>hat = <numer> / <denom>'", line_no, 1);
    std::string lhs(line.substr(0, eq));
    lhs.erase(0, lhs.find_first_not_of(" \t"));
    lhs.erase(lhs.find_last_not_of(" \t") + 1);
    std::size_t idx = state_names.size();
    for (std::size_t i = 0; i < state_names.size(); ++i)
      if (lhs == state_names[i] + "hat") idx = i;
    if (idx == state_names.size()) throw NameError("unknown map component '" + lhs + "' (line " + std::to_string(line_no) + ")");
    std::string_view rhs = line.substr(eq + 1);
    auto slash = rhs.find('/');
    // a top-level slash separates numerator and denominator; rational coefficients never occur
    if (slash == std::string_view::npos) {
      comps[idx] = RatFunc(algebra::ExpressionParser(rhs, table, {}, line_no, eq + 1).parse());
    } else {
      auto n = algebra::ExpressionParser(rhs.substr(0, slash), table, {}, line_no, eq + 1).parse();
      auto d = algebra::ExpressionParser(rhs.substr(slash + 1), table, {}, line_no, eq + 2 + slash).parse();
      comps[idx] = RatFunc(n, d);
    }
  }
  std::vector<RatFunc> out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (!comps[i]) throw ParseError("missing component " + state_names[i] + "hat", line_no, 1);
    out.push_back(*comps[i]);
  }
  return out;
}

}  // namespace cremona::scheme
