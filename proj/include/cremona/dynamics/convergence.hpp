#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "cremona/dynamics/orbit.hpp"

namespace cremona::dynamics {

struct ConvergenceResult {
  std::vector<double> dts;
  std::vector<double> errors;  // max-norm error at T against the reference
  double reference_dt = 0.0;
  bool exact = false;          // every error at rounding level; slope is NaN
  double slope = std::numeric_limits<double>::quiet_NaN();
};

/// Least-squares slope of log(y) against log(x) over the points with y > 0.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0) || !(x[i] > 0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace detail {

inline std::size_t steps_for(double T, double dt) {
  const double n = std::round(T / dt);
  if (n < 1 || std::fabs(n * dt - T) > 1e-9 * T)
    throw UsageError("T must be a positive multiple of every step size");
  return static_cast<std::size_t>(n);
}

/// State at T, or nullopt when the orbit meets a pole (non-finite value, near-singular step, or
/// a sign change of the step determinant).
inline std::optional<std::vector<double>> run_to(const scheme::FloatStepper& stepper, std::vector<double> x, double dt,
                                                 std::size_t n) {
  double prev_det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    double det = 0.0;
    try {
      x = stepper.step(x, dt, &det);
    } catch (const PoleError&) {
      return std::nullopt;
    }
    if ((det > 0) != (prev_det > 0)) return std::nullopt;
    prev_det = det;
  }
  return x;
}

}  // namespace detail

/// Self-convergence study: errors at time T of the runs with step sizes `dts` against a run with
/// step min(dts)/64 and the slope of log error against log step.
inline ConvergenceResult convergence_order(const PolarizedScheme& scheme, const std::vector<double>& x0, double T,
                                           const std::vector<double>& dts) {
  if (dts.empty()) throw UsageError("at least one step size is required");
  if (!(T > 0)) throw UsageError("T must be positive");
  double dmin = dts.front();
  for (double d : dts) {
    if (!(d > 0)) throw UsageError("step sizes must be positive");
    dmin = std::min(dmin, d);
  }
  scheme::FloatStepper stepper(scheme);
  ConvergenceResult r;
  const std::size_t nref = static_cast<std::size_t>(std::ceil(T / (dmin / 64.0)));
  r.reference_dt = T / static_cast<double>(nref);
  auto ref = detail::run_to(stepper, x0, r.reference_dt, nref);
  if (!ref) throw UsageError("the reference solution meets a pole before T; choose a different T");
  double scale = 1.0;
  for (double v : *ref) scale = std::max(scale, std::fabs(v));
  bool all_tiny = true;
  for (double dt : dts) {
    auto end = detail::run_to(stepper, x0, dt, detail::steps_for(T, dt));
    if (!end) throw UsageError("a run with step " + std::to_string(dt) + " meets a pole before T; choose a different T");
    double err = 0.0;
    for (std::size_t i = 0; i < end->size(); ++i) err = std::max(err, std::fabs((*end)[i] - (*ref)[i]));
    r.dts.push_back(dt);
    r.errors.push_back(err);
    if (err > 1e-12 * scale) all_tiny = false;
  }
  r.exact = all_tiny;
  if (!r.exact) r.slope = loglog_slope(r.dts, r.errors);
  return r;
}

}  // namespace cremona::dynamics
