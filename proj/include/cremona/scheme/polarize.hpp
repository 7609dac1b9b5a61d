#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cremona/algebra/multipoly.hpp"
#include "cremona/model/quad_system.hpp"

namespace cremona::scheme {

using algebra::MultiPoly;
using algebra::Rational;
using algebra::VarTablePtr;
using model::QuadSystem;

enum class Variant {
  polarized,  // x_j x_k -> (x_j xhat_k + xhat_j x_k) / 2
  literal,    // x_j x_k -> (x_j + xhat_j)(x_k + xhat_k) / 4, numeric use only
};

inline std::string to_string(Variant v) { return v == Variant::polarized ? "polarized" : "literal"; }

inline Variant parse_variant(const std::string& s) {
  if (s == "polarized") return Variant::polarized;
  if (s == "literal") return Variant::literal;
  throw UsageError("unknown scheme variant '" + s + "' (expected polarized or literal)");
}

struct Warning {
  std::string kind;
  std::string message;
};

/// Discretization x_hat - x = dt * F(x, x_hat) of a quadratic system. Both variants share
/// x_j^2 -> x_j xhat_j, x_j -> (x_j + xhat_j)/2 and leave constants unchanged.
class PolarizedScheme {
 public:
  PolarizedScheme(std::shared_ptr<const QuadSystem> sys, Variant variant) : sys_(std::move(sys)), variant_(variant) {
    const std::size_t m = sys_->dimension();
    std::vector<std::string> names = sys_->state_names();
    for (std::size_t i = 0; i < m; ++i) names.push_back(sys_->state_names()[i] + "hat");
    names.push_back("dt");
    table_ = algebra::make_vartable(names);
    if (variant_ == Variant::literal && sys_->has_cross_terms()) {
      warnings_.push_back({"NonBirationalWarning",
                           "the literal midpoint product makes the step equations quadratic in the new state; "
                           "the map is not birational and only numeric evaluation is available"});
    }
    for (std::size_t i = 0; i < m; ++i) {
      const auto& f = sys_->component(i);
      MultiPoly F = MultiPoly::constant(table_, f.c);
      for (std::size_t j = 0; j < m; ++j) {
        if (f.b[j] != 0) F += (f.b[j] / 2) * (x(j) + xhat(j));
        if (f.q[j][j] != 0) F += f.q[j][j] * (x(j) * xhat(j));
        for (std::size_t k = j + 1; k < m; ++k) {
          if (f.q[j][k] == 0) continue;
          const Rational coef = 2 * f.q[j][k];  // coefficient of x_j x_k in f_i
          if (variant_ == Variant::polarized) F += (coef / 2) * (x(j) * xhat(k) + xhat(j) * x(k));
          else F += (coef / 4) * ((x(j) + xhat(j)) * (x(k) + xhat(k)));
        }
      }
      F_.push_back(std::move(F));
    }
  }

  const QuadSystem& system() const noexcept { return *sys_; }
  const std::shared_ptr<const QuadSystem>& system_ptr() const noexcept { return sys_; }
  Variant variant() const noexcept { return variant_; }
  const std::vector<Warning>& warnings() const noexcept { return warnings_; }
  /// Variables x_1..x_m, xhat_1..xhat_m, dt.
  const VarTablePtr& table() const noexcept { return table_; }
  std::size_t dimension() const noexcept { return sys_->dimension(); }
  std::size_t dt_index() const noexcept { return 2 * dimension(); }

  /// True when x_hat is a rational function of x (every defining equation linear in x_hat).
  bool birational() const noexcept { return warnings_.empty(); }

  /// F_i(x, x_hat).
  const std::vector<MultiPoly>& rhs() const noexcept { return F_; }

  /// x_hat_i - x_i - dt * F_i(x, x_hat).
  std::vector<MultiPoly> defining_equations() const {
    std::vector<MultiPoly> out;
    for (std::size_t i = 0; i < dimension(); ++i) out.push_back(xhat(i) - x(i) - dt() * F_[i]);
    return out;
  }

  MultiPoly x(std::size_t j) const { return MultiPoly::variable(table_, j); }
  MultiPoly xhat(std::size_t j) const { return MultiPoly::variable(table_, dimension() + j); }
  MultiPoly dt() const { return MultiPoly::variable(table_, dt_index()); }

 private:
  std::shared_ptr<const QuadSystem> sys_;
  Variant variant_;
  VarTablePtr table_;
  std::vector<Warning> warnings_;
  std::vector<MultiPoly> F_;
};

inline PolarizedScheme polarize(const QuadSystem& sys, Variant variant = Variant::polarized) {
  return PolarizedScheme(std::make_shared<const QuadSystem>(sys), variant);
}

}  // namespace cremona::scheme
