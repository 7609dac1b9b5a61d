#pragma once

#include <cmath>
#include <numbers>

#include "cremona/errors.hpp"

namespace cremona::util {

inline double agm(double a, double b) {
  for (int i = 0; i < 64 && std::fabs(a - b) > 1e-16 * std::fabs(a); ++i) {
    const double m = (a + b) / 2;
    b = std::sqrt(a * b);
    a = m;
  }
  return (a + b) / 2;
}

/// Complete elliptic integral of the first kind with modulus k, 0 <= k < 1.
inline double elliptic_k(double k) {
  if (!(k >= 0 && k < 1)) throw UsageError("elliptic modulus must lie in [0, 1)");
  return std::numbers::pi / (2 * agm(1.0, std::sqrt(1 - k * k)));
}

}  // namespace cremona::util
