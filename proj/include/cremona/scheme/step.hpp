#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "cremona/scheme/polarize.hpp"

namespace cremona::scheme {

/// The step equations at a fixed state and step size: A(x, dt) * x_hat = rhs(x, dt), where
/// A = I - dt * (L(x) + B/2) with row i of L(x) equal to x^T Q_i.
template <typename T>
struct StepSystem {
  std::vector<std::vector<T>> a;
  std::vector<T> rhs;
};

template <typename T>
T from_rational(const Rational& r) {
  if constexpr (std::is_same_v<T, double>) return r.get_d();
  else return T(r);
}

/// Coefficients of the quadratic system converted once to T.
template <typename T>
class Coefficients {
 public:
  explicit Coefficients(const QuadSystem& sys) : m_(sys.dimension()) {
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& f = sys.component(i);
      c_.push_back(from_rational<T>(f.c));
      std::vector<T> b;
      std::vector<std::vector<T>> q;
      for (std::size_t j = 0; j < m_; ++j) {
        b.push_back(from_rational<T>(f.b[j]));
        std::vector<T> row;
        for (std::size_t k = 0; k < m_; ++k) row.push_back(from_rational<T>(f.q[j][k]));
        q.push_back(std::move(row));
      }
      b_.push_back(std::move(b));
      q_.push_back(std::move(q));
    }
  }

  std::size_t dimension() const noexcept { return m_; }

  StepSystem<T> polarized_system(std::span<const T> x, const T& dt) const {
    StepSystem<T> s;
    s.a.assign(m_, std::vector<T>(m_, T(0)));
    s.rhs.assign(m_, T(0));
    const T half = from_rational<T>(Rational(1, 2));
    for (std::size_t i = 0; i < m_; ++i) {
      T lin = c_[i];
      for (std::size_t j = 0; j < m_; ++j) lin += half * b_[i][j] * x[j];
      s.rhs[i] = x[i] + dt * lin;
      for (std::size_t k = 0; k < m_; ++k) {
        T coef = half * b_[i][k];
        for (std::size_t j = 0; j < m_; ++j)
          if (q_[i][j][k] != T(0)) coef += q_[i][j][k] * x[j];
        s.a[i][k] = (i == k ? T(1) : T(0)) - dt * coef;
      }
    }
    return s;
  }

  /// Residual and Jacobian (in x_hat) of x_hat - x - dt * F_literal(x, x_hat).
  void literal_residual(std::span<const T> x, std::span<const T> xh, const T& dt, std::vector<T>& g,
                        std::vector<std::vector<T>>& jac) const {
    const T half = from_rational<T>(Rational(1, 2));
    g.assign(m_, T(0));
    jac.assign(m_, std::vector<T>(m_, T(0)));
    for (std::size_t i = 0; i < m_; ++i) {
      T f = c_[i];
      std::vector<T> df(m_, T(0));
      for (std::size_t j = 0; j < m_; ++j) {
        f += half * b_[i][j] * (x[j] + xh[j]);
        df[j] += half * b_[i][j];
        f += q_[i][j][j] * x[j] * xh[j];
        df[j] += q_[i][j][j] * x[j];
        for (std::size_t k = j + 1; k < m_; ++k) {
          if (q_[i][j][k] == T(0)) continue;
          // 2 q_jk (x_j + xh_j)(x_k + xh_k) / 4
          const T sj = x[j] + xh[j], sk = x[k] + xh[k];
          f += half * q_[i][j][k] * sj * sk;
          df[j] += half * q_[i][j][k] * sk;
          df[k] += half * q_[i][j][k] * sj;
        }
      }
      g[i] = xh[i] - x[i] - dt * f;
      for (std::size_t k = 0; k < m_; ++k) jac[i][k] = (i == k ? T(1) : T(0)) - dt * df[k];
    }
  }

 private:
  std::size_t m_;
  std::vector<T> c_;
  std::vector<std::vector<T>> b_;
  std::vector<std::vector<std::vector<T>>> q_;
};

/// Gaussian elimination with partial pivoting. Returns false when |det| falls below
/// rel_threshold * prod of row 2-norms (Hadamard bound), leaving x untouched.
inline bool solve_float(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x,
                        double rel_threshold, double* det_out = nullptr) {
  const std::size_t n = a.size();
  double hadamard = 1.0;
  for (const auto& row : a) {
    double s = 0.0;
    for (double v : row) s += v * v;
    hadamard *= std::sqrt(s);
  }
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(a[i][k]) > std::fabs(a[piv][k])) piv = i;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      std::swap(b[piv], b[k]);
      det = -det;
    }
    det *= a[k][k];
    if (a[k][k] == 0.0) break;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  if (det_out) *det_out = det;
  if (!(std::fabs(det) >= rel_threshold * hadamard) || !std::isfinite(det)) return false;
  x.assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return true;
}

/// Exact elimination over a field-like T; nullopt when the matrix is singular.
template <typename T>
std::optional<std::vector<T>> solve_exact(std::vector<std::vector<T>> a, std::vector<T> b) {
  const std::size_t n = a.size();
  const T zero(Rational(0));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == zero) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[k]);
    std::swap(b[piv], b[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == zero) continue;
      const T f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<T> x(n, zero);
  for (std::size_t k = n; k-- > 0;) {
    T s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

inline constexpr double kPoleThreshold = 1e-14;

/// Float evaluation of one step of a scheme.
class FloatStepper {
 public:
  explicit FloatStepper(const PolarizedScheme& scheme, double pole_threshold = kPoleThreshold)
      : coeffs_(scheme.system()), literal_cross_(!scheme.birational()), threshold_(pole_threshold) {}

  std::size_t dimension() const noexcept { return coeffs_.dimension(); }

  /// Throws PoleError with the offending state near the exceptional locus.
  /// `det`, when given, receives the determinant of the step matrix.
  std::vector<double> step(std::span<const double> x, double dt, double* det = nullptr) const {
    if (x.size() != dimension()) throw UsageError("state length does not match the system dimension");
    for (double v : x)
      if (!std::isfinite(v)) throw PoleError("non-finite state", std::vector<double>(x.begin(), x.end()));
    if (dt == 0.0) {
      if (det) *det = 1.0;
      return {x.begin(), x.end()};
    }
    auto sys = coeffs_.polarized_system(x, dt);
    std::vector<double> out;
    if (!solve_float(sys.a, sys.rhs, out, threshold_, det))
      throw PoleError("step matrix is numerically singular (exceptional locus)", {x.begin(), x.end()});
    if (literal_cross_) newton_literal(x, dt, out);
    for (double v : out)
      if (!std::isfinite(v)) throw PoleError("step produced a non-finite state", {x.begin(), x.end()});
    return out;
  }

 private:
  void newton_literal(std::span<const double> x, double dt, std::vector<double>& xh) const {
    std::vector<double> g, delta;
    std::vector<std::vector<double>> jac;
    for (int it = 0; it < 60; ++it) {
      coeffs_.literal_residual(x, xh, dt, g, jac);
      for (auto& v : g) v = -v;
      if (!solve_float(jac, g, delta, threshold_))
        throw PoleError("singular Newton matrix in the literal scheme", {x.begin(), x.end()});
      double step = 0.0, scale = 1.0;
      for (std::size_t i = 0; i < xh.size(); ++i) {
        xh[i] += delta[i];
        step = std::max(step, std::fabs(delta[i]));
        scale = std::max(scale, std::fabs(xh[i]));
      }
      if (step <= 4e-16 * scale) return;
    }
    throw PoleError("Newton iteration of the literal scheme did not converge", {x.begin(), x.end()});
  }

  Coefficients<double> coeffs_;
  bool literal_cross_;
  double threshold_;
};

inline std::vector<double> eval_map_float(const PolarizedScheme& scheme, std::span<const double> x, double dt) {
  return FloatStepper(scheme).step(x, dt);
}

inline std::vector<double> eval_map_float(const PolarizedScheme& scheme, const std::vector<double>& x, double dt) {
  return eval_map_float(scheme, std::span<const double>(x), dt);
}

/// Exact step by rational elimination of the step equations.
class ExactStepper {
 public:
  explicit ExactStepper(const PolarizedScheme& scheme) : coeffs_(scheme.system()) {
    if (!scheme.birational()) throw UsageError("the literal scheme with cross terms has no exact rational step");
  }

  std::vector<Rational> step(std::span<const Rational> x, const Rational& dt) const {
    if (x.size() != coeffs_.dimension()) throw UsageError("state length does not match the system dimension");
    if (dt == 0) return {x.begin(), x.end()};
    auto sys = coeffs_.polarized_system(x, dt);
    auto out = solve_exact(std::move(sys.a), std::move(sys.rhs));
    if (!out) throw ExceptionalLocusError("the step denominator vanishes at this state");
    return *out;
  }

 private:
  Coefficients<Rational> coeffs_;
};

}  // namespace cremona::scheme
