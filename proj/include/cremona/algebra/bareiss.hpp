#pragma once

#include <utility>
#include <vector>

#include "cremona/algebra/gcd.hpp"
#include "cremona/algebra/ratfunc.hpp"

namespace cremona::algebra {

using PolyMatrix = std::vector<std::vector<MultiPoly>>;

/// x_i = numerators[i] / det, unreduced. det equals det(A) up to the sign of the row
/// permutation used for pivoting.
struct BareissSolution {
  std::vector<MultiPoly> numerators;
  MultiPoly det;
};

/// Fraction-free Gauss-Jordan elimination on [A | b]. Every division is exact.
inline BareissSolution bareiss_eliminate(const PolyMatrix& a, const std::vector<MultiPoly>& b) {
  const std::size_t n = a.size();
  if (n == 0) throw UsageError("empty linear system");
  if (b.size() != n) throw UsageError("right-hand side length does not match the matrix");
  for (const auto& row : a)
    if (row.size() != n) throw UsageError("matrix is not square");
  const VarTablePtr& vars = a[0][0].vars();
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& e : a[i]) require_same_table(vars, e.vars());
    require_same_table(vars, b[i].vars());
  }

  PolyMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = a[i];
    m[i].push_back(b[i]);
  }
  MultiPoly prev = MultiPoly::constant(vars, Rational(1));
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) throw SingularError("matrix is identically singular");
      std::swap(m[k], m[r]);
    }
    const MultiPoly& pivot = m[k][k];
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const MultiPoly factor = m[i][k];
      for (std::size_t j = k + 1; j <= n; ++j) {
        auto q = divide_exact(pivot * m[i][j] - factor * m[k][j], prev);
        if (!q) throw std::logic_error("inexact fraction-free elimination step");
        m[i][j] = std::move(*q);
      }
      m[i][k] = MultiPoly(vars);
      // every earlier diagonal entry tracks the current pivot
      if (i < k) m[i][i] = pivot;
    }
    prev = pivot;
  }
  BareissSolution out;
  out.det = m[n - 1][n - 1];
  for (std::size_t i = 0; i < n; ++i) {
    if (!(m[i][i] == out.det)) throw std::logic_error("fraction-free elimination lost the common diagonal");
    out.numerators.push_back(m[i][n]);
  }
  return out;
}

inline std::vector<RatFunc> bareiss_solve(const PolyMatrix& a, const std::vector<MultiPoly>& b) {
  auto s = bareiss_eliminate(a, b);
  std::vector<RatFunc> x;
  x.reserve(s.numerators.size());
  for (auto& p : s.numerators) x.emplace_back(p, s.det);
  return x;
}

}  // namespace cremona::algebra
