#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cremona/model/invariants.hpp"
#include "cremona/scheme/step.hpp"

namespace cremona::dynamics {

using algebra::Rational;
using model::Invariant;
using scheme::PolarizedScheme;

struct Event {
  std::size_t step;  // index of the state the failed step started from
  std::string kind;  // "pole", "pole-skipped", "exceptional-locus"
  std::string message;
};

/// states[k + 1] = C(dt)(states[k]) in the arithmetic of T (double or Rational).
template <typename T>
struct Orbit {
  std::vector<std::string> state_names;
  T t0{0};
  T dt{0};
  std::vector<std::vector<T>> states;
  std::vector<Event> events;
  std::vector<std::string> invariant_names;
  std::vector<std::vector<T>> invariant_traces;  // [invariant][step]
  bool truncated = false;                        // stopped before the requested number of steps

  T time(std::size_t k) const { return t0 + T(static_cast<long>(k)) * dt; }
  std::size_t size() const noexcept { return states.size(); }
};

struct IntegrateOptions {
  bool skip_on_pole = false;
  /// A skipped step restarts from the state scaled by (1 + skip_perturbation).
  double skip_perturbation = 1e-10;
  std::size_t bit_budget = 1'000'000;  // per coordinate, exact mode
  std::vector<Invariant> invariants;
};

template <typename T>
void record_invariants(Orbit<T>& orbit, const std::vector<Invariant>& invs) {
  orbit.invariant_names.clear();
  orbit.invariant_traces.assign(invs.size(), {});
  for (std::size_t i = 0; i < invs.size(); ++i) {
    orbit.invariant_names.push_back(invs[i].name);
    for (const auto& x : orbit.states) orbit.invariant_traces[i].push_back(invs[i].expr.evaluate(std::span<const T>(x)));
  }
}

inline Orbit<double> integrate_float(const PolarizedScheme& scheme, const std::vector<double>& x0, double dt,
                                     std::size_t steps, const IntegrateOptions& opt = {}) {
  if (x0.size() != scheme.dimension()) throw UsageError("initial state length does not match the system dimension");
  scheme::FloatStepper stepper(scheme);
  Orbit<double> orbit;
  orbit.state_names = scheme.system().state_names();
  orbit.dt = dt;
  orbit.states.reserve(steps + 1);
  orbit.states.push_back(x0);
  for (std::size_t k = 0; k < steps; ++k) {
    const auto& x = orbit.states.back();
    try {
      orbit.states.push_back(stepper.step(x, dt));
    } catch (const PoleError& e) {
      if (!opt.skip_on_pole) {
        orbit.events.push_back({k, "pole", e.what()});
        orbit.truncated = true;
        break;
      }
      std::vector<double> nudged = x;
      for (auto& v : nudged) v += opt.skip_perturbation * (v == 0.0 ? 1.0 : v);
      try {
        orbit.states.push_back(stepper.step(nudged, dt));
        orbit.events.push_back({k, "pole-skipped", e.what()});
      } catch (const PoleError& again) {
        orbit.events.push_back({k, "pole", again.what()});
        orbit.truncated = true;
        break;
      }
    }
  }
  record_invariants(orbit, opt.invariants);
  return orbit;
}

inline Orbit<Rational> integrate_exact(const PolarizedScheme& scheme, const std::vector<Rational>& x0, const Rational& dt,
                                       std::size_t steps, const IntegrateOptions& opt = {}) {
  if (x0.size() != scheme.dimension()) throw UsageError("initial state length does not match the system dimension");
  scheme::ExactStepper stepper(scheme);
  Orbit<Rational> orbit;
  orbit.state_names = scheme.system().state_names();
  orbit.dt = dt;
  orbit.states.push_back(x0);
  for (std::size_t k = 0; k < steps; ++k) {
    try {
      auto next = stepper.step(orbit.states.back(), dt);
      for (const auto& v : next)
        if (algebra::bit_size(v) > opt.bit_budget)
          throw ResourceError("exact orbit exceeded the bit budget of " + std::to_string(opt.bit_budget) +
                              " bits per coordinate at step " + std::to_string(k + 1));
      orbit.states.push_back(std::move(next));
    } catch (const ExceptionalLocusError& e) {
      orbit.events.push_back({k, "exceptional-locus", e.what()});
      orbit.truncated = true;
      break;
    }
  }
  record_invariants(orbit, opt.invariants);
  return orbit;
}

template <typename T>
struct DriftReport {
  std::vector<std::string> names;
  std::vector<std::vector<T>> drift;  // I(x_k) - I(x_0)
  std::vector<double> max_abs;
};

template <typename T>
DriftReport<T> monitor_invariants(const Orbit<T>& orbit, const std::vector<Invariant>& invs) {
  DriftReport<T> r;
  for (const auto& inv : invs) {
    r.names.push_back(inv.name);
    std::vector<T> d;
    double worst = 0.0;
    if (!orbit.states.empty()) {
      const T base = inv.expr.evaluate(std::span<const T>(orbit.states.front()));
      for (const auto& x : orbit.states) {
        T v = inv.expr.evaluate(std::span<const T>(x)) - base;
        double a;
        if constexpr (std::is_same_v<T, double>) a = std::fabs(v);
        else a = std::fabs(v.get_d());
        worst = std::max(worst, a);
        d.push_back(v);
      }
    }
    r.drift.push_back(std::move(d));
    r.max_abs.push_back(worst);
  }
  return r;
}

}  // namespace cremona::dynamics
