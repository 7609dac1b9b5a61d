#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cremona/algebra/multipoly.hpp"
#include "cremona/algebra/rational.hpp"
#include "cremona/algebra/vartable.hpp"

namespace cremona::model {

using algebra::MultiPoly;
using algebra::Rational;
using algebra::VarTablePtr;

/// f(x) = x^T q x + b . x + c with q symmetric.
struct QuadComponent {
  Rational c;
  std::vector<Rational> b;
  std::vector<std::vector<Rational>> q;

  bool operator==(const QuadComponent&) const = default;
};

/// Quadratic vector field x' = f(x) with exact rational coefficients. Parameters are bound at
/// construction and already folded into the coefficients.
class QuadSystem {
 public:
  QuadSystem(std::vector<std::string> state_names, std::vector<std::pair<std::string, Rational>> params,
             std::vector<QuadComponent> components, std::string origin = {})
      : names_(std::move(state_names)),
        params_(std::move(params)),
        comps_(std::move(components)),
        origin_(std::move(origin)),
        table_(algebra::make_vartable(names_)) {
    const std::size_t m = names_.size();
    if (m == 0) throw UsageError("a system needs at least one state variable");
    if (comps_.size() != m) throw UsageError("one right-hand side per state variable is required");
    for (const auto& f : comps_) {
      if (f.b.size() != m || f.q.size() != m) throw UsageError("coefficient shape does not match the dimension");
      for (std::size_t j = 0; j < m; ++j) {
        if (f.q[j].size() != m) throw UsageError("quadratic form is not square");
        for (std::size_t k = 0; k < j; ++k)
          if (f.q[j][k] != f.q[k][j]) throw UsageError("quadratic form is not symmetric");
      }
    }
  }

  /// Builds the coefficient form of polynomial right-hand sides over the state table.
  static QuadSystem from_polynomials(std::vector<std::string> state_names,
                                     std::vector<std::pair<std::string, Rational>> params,
                                     const std::vector<MultiPoly>& rhs, std::string origin = {}) {
    const std::size_t m = state_names.size();
    std::vector<QuadComponent> comps;
    for (const auto& f : rhs) {
      QuadComponent c{Rational(0), std::vector<Rational>(m), std::vector<std::vector<Rational>>(m, std::vector<Rational>(m))};
      for (const auto& t : f.terms()) {
        const auto deg = t.mono.total_degree();
        if (deg > 2) throw DegreeError("right-hand side has degree above 2");
        if (deg == 0) {
          c.c = t.coeff;
          continue;
        }
        std::vector<std::size_t> at;
        for (std::size_t v = 0; v < m; ++v)
          for (std::uint32_t e = 0; e < t.mono[v]; ++e) at.push_back(v);
        if (deg == 1) {
          c.b[at[0]] = t.coeff;
        } else if (at[0] == at[1]) {
          c.q[at[0]][at[0]] = t.coeff;
        } else {
          c.q[at[0]][at[1]] = t.coeff / 2;
          c.q[at[1]][at[0]] = t.coeff / 2;
        }
      }
      comps.push_back(std::move(c));
    }
    return QuadSystem(std::move(state_names), std::move(params), std::move(comps), std::move(origin));
  }

  std::size_t dimension() const noexcept { return names_.size(); }
  const std::vector<std::string>& state_names() const noexcept { return names_; }
  const std::vector<std::pair<std::string, Rational>>& params() const noexcept { return params_; }
  const std::vector<QuadComponent>& components() const noexcept { return comps_; }
  const QuadComponent& component(std::size_t i) const { return comps_.at(i); }
  /// Builtin name ("wp", "jacobi", "riccati") or empty for user systems.
  const std::string& origin() const noexcept { return origin_; }
  const VarTablePtr& state_table() const noexcept { return table_; }

  bool has_cross_terms() const {
    for (const auto& f : comps_)
      for (std::size_t j = 0; j < f.q.size(); ++j)
        for (std::size_t k = 0; k < f.q.size(); ++k)
          if (j != k && f.q[j][k] != 0) return true;
    return false;
  }

  /// f_i over `vars`, whose first m variables are the state variables in order.
  MultiPoly rhs_poly(std::size_t i, const VarTablePtr& vars) const {
    const auto& f = comps_.at(i);
    const std::size_t m = dimension();
    MultiPoly out = MultiPoly::constant(vars, f.c);
    for (std::size_t j = 0; j < m; ++j) {
      if (f.b[j] != 0) out += f.b[j] * MultiPoly::variable(vars, j);
      for (std::size_t k = 0; k < m; ++k)
        if (f.q[j][k] != 0) out += f.q[j][k] * (MultiPoly::variable(vars, j) * MultiPoly::variable(vars, k));
    }
    return out;
  }

  MultiPoly rhs_poly(std::size_t i) const { return rhs_poly(i, table_); }

  /// Equality of the mathematical content; the origin tag is not compared.
  bool operator==(const QuadSystem& o) const {
    return names_ == o.names_ && params_ == o.params_ && comps_ == o.comps_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::pair<std::string, Rational>> params_;
  std::vector<QuadComponent> comps_;
  std::string origin_;
  VarTablePtr table_;
};

/// f(x) in the arithmetic of T (Rational or double).
template <typename T>
std::vector<T> rhs_eval(const QuadSystem& sys, std::span<const T> x) {
  const std::size_t m = sys.dimension();
  if (x.size() != m) throw UsageError("state length does not match the system dimension");
  auto conv = [](const Rational& r) -> T {
    if constexpr (std::is_same_v<T, double>) return r.get_d();
    else return T(r);
  };
  std::vector<T> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& f = sys.component(i);
    T acc = conv(f.c);
    for (std::size_t j = 0; j < m; ++j) {
      if (f.b[j] != 0) acc += conv(f.b[j]) * x[j];
      for (std::size_t k = 0; k < m; ++k)
        if (f.q[j][k] != 0) acc += conv(f.q[j][k]) * x[j] * x[k];
    }
    out[i] = acc;
  }
  return out;
}

template <typename T>
std::vector<T> rhs_eval(const QuadSystem& sys, const std::vector<T>& x) {
  return rhs_eval<T>(sys, std::span<const T>(x));
}

}  // namespace cremona::model
