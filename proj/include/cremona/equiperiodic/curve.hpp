#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cremona/algebra/ratfunc.hpp"
#include "cremona/scheme/step.hpp"
#include "cremona/util/parallel.hpp"

namespace cremona::equiperiodic {

struct PlotBox {
  double x_lo = -3, x_hi = 3, y_lo = -3, y_hi = 3;
};

struct CurveSample {
  std::vector<std::array<double, 2>> points;
  bool empty_curve = false;  // F does not involve the state at this step
  std::string notice;
};

/// F with dt = tau0 substituted, as a polynomial in the two state variables (indices 0 and 1).
inline algebra::MultiPoly slice_at(const algebra::MultiPoly& f, const algebra::Rational& tau0) {
  const auto& t = f.vars();
  if (auto dt = t->index_of("dt")) return algebra::detail::substitute_constants(f, {{*dt, tau0}});
  return f;
}

/// Scale of the terms of p at a point; the denominator of relative residuals.
inline double term_scale(const algebra::MultiPoly& p, std::span<const double> point) {
  double s = 0.0;
  for (const auto& t : p.terms()) {
    double v = std::fabs(t.coeff.get_d());
    for (std::size_t i = 0; i < point.size(); ++i)
      if (t.mono[i]) v *= std::pow(std::fabs(point[i]), static_cast<double>(t.mono[i]));
    s += v;
  }
  return s;
}

/// |p(point)| relative to the sum of the absolute values of its terms.
inline double relative_residual(const algebra::MultiPoly& p, std::span<const double> point) {
  const double s = term_scale(p, point);
  return s == 0.0 ? 0.0 : std::fabs(p.evaluate(point)) / s;
}

/// Sign-change contour points of F(., ., tau0) = 0 on a grid x grid cell lattice over the box.
/// Each point lies on a grid edge whose ends have opposite signs and is refined along that edge
/// by bisection to `tol`. Points are ordered by row (horizontal edges) and then by column
/// (vertical edges), independent of the thread count.
inline CurveSample sample_curve(const algebra::MultiPoly& f, const algebra::Rational& tau0, const PlotBox& box,
                                std::size_t grid = 400, double tol = 1e-12, std::size_t threads = 1) {
  if (grid < 1) throw UsageError("grid must have at least one cell");
  if (!(box.x_lo < box.x_hi && box.y_lo < box.y_hi)) throw UsageError("empty plot box");
  const auto g = slice_at(f, tau0);
  const auto& t = g.vars();
  for (std::size_t v = 2; v < t->size(); ++v)
    if (g.involves(v)) throw UsageError("curve sampling needs a polynomial in two state variables and dt");
  CurveSample out;
  if (g.is_zero()) throw UsageError("the step is a root of the content of F in dt; every state is periodic");
  if (!g.involves(0) && !g.involves(1)) {
    out.empty_curve = true;
    out.notice = "EmptyCurve: F does not involve the state at this step, so the set is empty or the whole plane";
    return out;
  }
  const std::size_t nv = t->size();
  auto eval = [&](double x, double y) {
    std::vector<double> p(nv, 0.0);
    p[0] = x;
    p[1] = y;
    return g.evaluate(std::span<const double>(p));
  };
  const double hx = (box.x_hi - box.x_lo) / static_cast<double>(grid);
  const double hy = (box.y_hi - box.y_lo) / static_cast<double>(grid);
  auto xs = [&](std::size_t i) { return box.x_lo + static_cast<double>(i) * hx; };
  auto ys = [&](std::size_t j) { return box.y_lo + static_cast<double>(j) * hy; };

  auto values = util::parallel_map(grid + 1, threads, [&](std::size_t j) {
    std::vector<double> row(grid + 1);
    for (std::size_t i = 0; i <= grid; ++i) row[i] = eval(xs(i), ys(j));
    return row;
  });
  // bisection on the segment from a to b, where F has opposite signs at the ends
  auto refine = [&](std::array<double, 2> a, std::array<double, 2> b, double fa) {
    for (int it = 0; it < 200; ++it) {
      const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      if (len <= tol) break;
      std::array<double, 2> m{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2};
      const double fm = eval(m[0], m[1]);
      if (fm == 0.0) return m;
      if ((fm > 0) == (fa > 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return std::array<double, 2>{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2};
  };
  auto opposite = [](double u, double v) { return (u > 0 && v < 0) || (u < 0 && v > 0); };

  auto rows = util::parallel_map(grid + 1, threads, [&](std::size_t j) {
    std::vector<std::array<double, 2>> pts;
    for (std::size_t i = 0; i <= grid; ++i) {
      const double v = values[j][i];
      if (v == 0.0) pts.push_back({xs(i), ys(j)});
      if (i < grid && opposite(v, values[j][i + 1])) pts.push_back(refine({xs(i), ys(j)}, {xs(i + 1), ys(j)}, v));
    }
    return pts;
  });
  auto cols = util::parallel_map(grid + 1, threads, [&](std::size_t i) {
    std::vector<std::array<double, 2>> pts;
    for (std::size_t j = 0; j < grid; ++j)
      if (opposite(values[j][i], values[j + 1][i]))
        pts.push_back(refine({xs(i), ys(j)}, {xs(i), ys(j + 1)}, values[j][i]));
    return pts;
  });
  for (auto& r : rows) out.points.insert(out.points.end(), r.begin(), r.end());
  for (auto& c : cols) out.points.insert(out.points.end(), c.begin(), c.end());
  return out;
}

struct TransportReport {
  std::size_t steps_taken = 0;
  double max_residual = 0.0;  // largest relative residual of F along the orbit
  double closure = 0.0;       // |x_n - x_0| max norm after `steps` steps
  bool met_pole = false;
};

/// Follows the float orbit of `start` under C(tau0) and measures F(x_k, tau0) along it.
inline TransportReport membership_transport(const scheme::PolarizedScheme& scheme, const algebra::MultiPoly& f,
                                            const algebra::Rational& tau0, std::array<double, 2> start,
                                            std::size_t steps) {
  if (scheme.dimension() != 2) throw UsageError("membership transport needs a two-dimensional system");
  const auto g = slice_at(f, tau0);
  const std::size_t nv = g.vars()->size();
  scheme::FloatStepper stepper(scheme);
  std::vector<double> x{start[0], start[1]};
  TransportReport r;
  auto residual = [&](const std::vector<double>& s) {
    std::vector<double> p(nv, 0.0);
    p[0] = s[0];
    p[1] = s[1];
    return relative_residual(g, p);
  };
  r.max_residual = residual(x);
  const double dt = tau0.get_d();
  try {
    for (std::size_t k = 0; k < steps; ++k) {
      x = stepper.step(x, dt);
      ++r.steps_taken;
      r.max_residual = std::max(r.max_residual, residual(x));
    }
  } catch (const PoleError&) {
    r.met_pole = true;
  }
  r.closure = std::max(std::fabs(x[0] - start[0]), std::fabs(x[1] - start[1]));
  return r;
}

}  // namespace cremona::equiperiodic
