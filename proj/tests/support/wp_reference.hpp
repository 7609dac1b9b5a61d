#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

// Independent reference for x' = y, y' = 6x^2 - a on a uniform grid: classical RK4 in long
// double away from poles, and the Laurent expansion of the Weierstrass function across them.
// The solution is x = wp(t - t_p; g2, g3) with g2 = 2a and g3 = 4x^3 - g2 x - y^2.
namespace wp_reference {

using LD = long double;

struct State {
  LD x, y;
};

struct Laurent {
  std::vector<LD> c;  // wp(u) = u^-2 + sum_{k>=2} c[k] u^(2k-2)

  Laurent(LD g2, LD g3, int order = 40) : c(order + 1, 0) {
    c[2] = g2 / 20;
    c[3] = g3 / 28;
    for (int k = 4; k <= order; ++k) {
      LD s = 0;
      for (int m = 2; m <= k - 2; ++m) s += c[m] * c[k - m];
      c[k] = 3 * s / ((2 * k + 1) * static_cast<LD>(k - 3));
    }
  }
  LD value(LD u) const {
    LD s = 1 / (u * u);
    for (std::size_t k = 2; k < c.size(); ++k) s += c[k] * std::pow(u, static_cast<LD>(2 * k - 2));
    return s;
  }
  LD derivative(LD u) const {
    LD s = -2 / (u * u * u);
    for (std::size_t k = 2; k < c.size(); ++k) s += c[k] * static_cast<LD>(2 * k - 2) * std::pow(u, static_cast<LD>(2 * k - 3));
    return s;
  }
};

struct Reference {
  std::vector<State> states;  // at t = k * dt
  std::vector<LD> poles;
  LD energy_drift = 0;  // max |g3(t) - g3(0)| over the RK segments
};

inline Reference integrate(LD a, State s, LD dt, std::size_t steps, int substeps = 1000, LD switch_at = 40,
                           LD window = 0.15L) {
  auto f = [&](State v) { return State{v.y, 6 * v.x * v.x - a}; };
  auto rk4 = [&](State v, LD h) {
    auto k1 = f(v);
    auto k2 = f({v.x + h / 2 * k1.x, v.y + h / 2 * k1.y});
    auto k3 = f({v.x + h / 2 * k2.x, v.y + h / 2 * k2.y});
    auto k4 = f({v.x + h * k3.x, v.y + h * k3.y});
    return State{v.x + h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x), v.y + h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y)};
  };
  const LD g2 = 2 * a;
  auto g3_of = [&](State v) { return 4 * v.x * v.x * v.x - g2 * v.x - v.y * v.y; };
  const LD g3 = g3_of(s);
  const Laurent wp(g2, g3);

  Reference ref;
  ref.states.resize(steps + 1);
  ref.states[0] = s;
  const LD h = dt / substeps;
  LD t = 0;
  std::size_t k = 0;
  while (k < steps) {
    const LD target = static_cast<LD>(k + 1) * dt;
    const int n = std::max(1, static_cast<int>(std::ceil((target - t) / h - 1e-9L)));
    const LD hh = (target - t) / n;
    bool jumped = false;
    for (int i = 0; i < n && !jumped; ++i) {
      s = rk4(s, hh);
      t += hh;
      ref.energy_drift = std::max(ref.energy_drift, std::fabs(g3_of(s) - g3));
      // approaching a pole x grows to +inf with y > 0; after it y < 0
      if (s.x < switch_at || s.y < 0) continue;
      // here x = wp(t - t_p) with t < t_p; solve wp(u) = x for u = t_p - t by Newton
      LD u = 1 / std::sqrt(s.x);
      for (int it = 0; it < 60; ++it) u -= (wp.value(u) - s.x) / wp.derivative(u);
      const LD tp = t + u;
      ref.poles.push_back(tp);
      const LD resume = tp + window;
      std::size_t j = k + 1;
      for (; j <= steps && static_cast<LD>(j) * dt <= resume; ++j) {
        const LD uj = static_cast<LD>(j) * dt - tp;
        ref.states[j] = {wp.value(uj), wp.derivative(uj)};
      }
      s = {wp.value(window), wp.derivative(window)};
      t = resume;
      k = j - 1;
      jumped = true;
    }
    if (jumped) continue;
    ++k;
    t = target;
    ref.states[k] = s;
  }
  return ref;
}

}  // namespace wp_reference
