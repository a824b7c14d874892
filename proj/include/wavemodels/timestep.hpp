// timestep.hpp
// Explicit time stepping over flat state vectors: the Dormand-Prince 5(4)
// embedded pair with a basic step-size controller, and classical RK4 for
// fixed-step studies.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "wavemodels/error.hpp"

namespace wavemodels {

using State = std::vector<double>;
using Rhs = std::function<State(double t, const State& y)>;

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-8;
  double dt_initial = 1e-3;
  double dt_min = 1e-12;
  double dt_max = 1.0;
  double safety = 0.9;
  long max_steps = 1'000'000;

  void validate() const {
    auto positive = [](double x, const char* key) {
      if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("must be a positive finite number", key);
    };
    positive(rel_tol, "integrator.rel_tol");
    positive(abs_tol, "integrator.abs_tol");
    positive(dt_initial, "integrator.dt_initial");
    positive(dt_min, "integrator.dt_min");
    positive(dt_max, "integrator.dt_max");
    if (!(dt_min <= dt_initial && dt_initial <= dt_max)) {
      throw ConfigError("need dt_min <= dt_initial <= dt_max", "integrator.dt_initial");
    }
    if (!(safety > 0.0 && safety < 1.0)) throw ConfigError("must lie in (0, 1)", "integrator.safety");
    if (max_steps <= 0) throw ConfigError("must be positive", "integrator.max_steps");
  }
};

enum class StopKind { reached_tmax, event, dt_underflow, max_steps };

struct StopReason {
  StopKind kind = StopKind::reached_tmax;
  std::string event;  // name of the event that fired, if any

  std::string to_string() const {
    switch (kind) {
      case StopKind::reached_tmax: return "reached_tmax";
      case StopKind::event: return "event(" + event + ")";
      case StopKind::dt_underflow: return "dt_underflow";
      case StopKind::max_steps: return "max_steps";
    }
    return "unknown";
  }
};

/// Named predicate checked after every accepted step.
struct Event {
  std::string name;
  std::function<bool(double t, const State& y)> fires;
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  StopReason stop;
  StepStats stats;
  double final_time = 0.0;
  State final_state;
};

/// Called after every accepted step (and once for the initial state).
using StepObserver = std::function<void(double t, const State& y)>;

namespace detail {

inline bool all_finite(const State& y) {
  return std::all_of(y.begin(), y.end(), [](double x) { return std::isfinite(x); });
}

// y + dt * sum_i a_i k_i
template <std::size_t S>
State combine(const State& y, double dt, const std::array<double, S>& a, const std::array<const State*, S>& k) {
  State out = y;
  for (std::size_t i = 0; i < S; ++i) {
    if (a[i] == 0.0) continue;
    const double c = dt * a[i];
    const State& ki = *k[i];
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * ki[j];
  }
  return out;
}

inline State checked_rhs(const Rhs& rhs, double t, const State& y) {
  State d = rhs(t, y);
  if (d.size() != y.size()) throw UsageError("rhs returned a state of the wrong size");
  return d;
}

}  // namespace detail

inline State step_rk4(const Rhs& rhs, const State& y, double t, double dt) {
  if (!(dt > 0.0)) throw UsageError("step_rk4 needs dt > 0");
  if (!detail::all_finite(y)) throw NumericError("step_rk4: non-finite state");
  const State k1 = detail::checked_rhs(rhs, t, y);
  const State k2 = detail::checked_rhs(rhs, t + 0.5 * dt, detail::combine<1>(y, dt, {0.5}, {&k1}));
  const State k3 = detail::checked_rhs(rhs, t + 0.5 * dt, detail::combine<1>(y, dt, {0.5}, {&k2}));
  const State k4 = detail::checked_rhs(rhs, t + dt, detail::combine<1>(y, dt, {1.0}, {&k3}));
  State out = detail::combine<4>(y, dt, {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6}, {&k1, &k2, &k3, &k4});
  if (!detail::all_finite(out)) throw NumericError("step_rk4: non-finite result");
  return out;
}

struct DopriStep {
  State y;       // fifth-order solution
  State error;   // difference between the fifth- and fourth-order solutions
  State k_last;  // rhs at (t + dt, y), reusable as the next first stage
};

/// One Dormand-Prince 5(4) step. k1 = rhs(t, y) may be passed in (FSAL).
inline DopriStep step_dopri5(const Rhs& rhs, const State& y, double t, double dt, const State* k1_in = nullptr) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b* for the embedded fourth-order solution
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  const State k1 = k1_in ? *k1_in : detail::checked_rhs(rhs, t, y);
  const State k2 = detail::checked_rhs(rhs, t + c2 * dt, detail::combine<1>(y, dt, {a21}, {&k1}));
  const State k3 = detail::checked_rhs(rhs, t + c3 * dt, detail::combine<2>(y, dt, {a31, a32}, {&k1, &k2}));
  const State k4 =
      detail::checked_rhs(rhs, t + c4 * dt, detail::combine<3>(y, dt, {a41, a42, a43}, {&k1, &k2, &k3}));
  const State k5 = detail::checked_rhs(rhs, t + c5 * dt,
                                       detail::combine<4>(y, dt, {a51, a52, a53, a54}, {&k1, &k2, &k3, &k4}));
  const State k6 = detail::checked_rhs(
      rhs, t + dt, detail::combine<5>(y, dt, {a61, a62, a63, a64, a65}, {&k1, &k2, &k3, &k4, &k5}));
  State y5 = detail::combine<6>(y, dt, {b1, 0.0, b3, b4, b5, b6}, {&k1, &k2, &k3, &k4, &k5, &k6});
  State k7 = detail::checked_rhs(rhs, t + dt, y5);

  State err(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    err[j] = dt * (e1 * k1[j] + e3 * k3[j] + e4 * k4[j] + e5 * k5[j] + e6 * k6[j] + e7 * k7[j]);
  }
  return {std::move(y5), std::move(err), std::move(k7)};
}

/// Adaptive Dormand-Prince integration from t0 to t1.
/// sample_every > 0 stores linearly interpolated snapshots at t0 + m*sample_every;
/// sample_every <= 0 stores every accepted step. The final state is always stored.
inline Trajectory integrate(const Rhs& rhs, const State& y0, double t0, double t1, const IntegratorConfig& cfg,
                            const std::vector<Event>& events = {}, double sample_every = 0.0,
                            const StepObserver& observer = {}) {
  cfg.validate();
  if (!(t1 > t0)) throw UsageError("integrate needs t1 > t0");
  if (!detail::all_finite(y0)) throw NumericError("integrate: non-finite initial state");

  Trajectory traj;
  traj.times.push_back(t0);
  traj.states.push_back(y0);
  if (observer) observer(t0, y0);

  double t = t0;
  State y = y0;
  State k1 = detail::checked_rhs(rhs, t, y);
  traj.stats.rhs_evals = 1;
  if (!detail::all_finite(k1)) throw NumericError("integrate: non-finite rhs at the initial state");

  long next_sample = 1;
  auto record_samples = [&](double ta, const State& ya, double tb, const State& yb) {
    if (!(sample_every > 0.0)) {
      traj.times.push_back(tb);
      traj.states.push_back(yb);
      return;
    }
    for (;;) {
      const double ts = t0 + static_cast<double>(next_sample) * sample_every;
      if (ts > tb) break;
      const double w = (ts - ta) / (tb - ta);
      State ys(ya.size());
      for (std::size_t j = 0; j < ys.size(); ++j) ys[j] = (1.0 - w) * ya[j] + w * yb[j];
      traj.times.push_back(ts);
      traj.states.push_back(std::move(ys));
      ++next_sample;
    }
  };

  double dt = std::min({cfg.dt_initial, cfg.dt_max, t1 - t0});
  bool last_rejected = false;
  // Relative closeness to t1 below which the run counts as finished.
  const double t_eps = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t0), std::abs(t1));

  while (true) {
    if (t1 - t <= t_eps) {
      traj.stop = {StopKind::reached_tmax, {}};
      break;
    }
    if (traj.stats.accepted >= cfg.max_steps) {
      traj.stop = {StopKind::max_steps, {}};
      break;
    }
    const bool lands = t + dt >= t1 - t_eps;
    const double h = lands ? t1 - t : dt;

    bool finite = true;
    DopriStep step;
    try {
      step = step_dopri5(rhs, y, t, h, &k1);
      finite = detail::all_finite(step.y) && detail::all_finite(step.error) && detail::all_finite(step.k_last);
    } catch (const NumericError&) {
      finite = false;
    }
    traj.stats.rhs_evals += 6;

    double err = INFINITY;
    if (finite) {
      double acc = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j) {
        const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[j]), std::abs(step.y[j]));
        const double r = step.error[j] / sc;
        acc += r * r;
      }
      err = y.empty() ? 0.0 : std::sqrt(acc / static_cast<double>(y.size()));
    }

    if (err <= 1.0) {
      const double t_new = lands ? t1 : t + h;
      record_samples(t, y, t_new, step.y);
      t = t_new;
      y = std::move(step.y);
      k1 = std::move(step.k_last);
      ++traj.stats.accepted;
      if (observer) observer(t, y);

      const double grow = err == 0.0 ? 5.0 : std::clamp(cfg.safety * std::pow(err, -0.2), 0.2, 5.0);
      // keep the pre-clamp step when the last step was shortened to hit t1
      dt = std::min(cfg.dt_max, (lands ? std::max(h, dt) : h) * (last_rejected ? std::min(grow, 1.0) : grow));
      last_rejected = false;

      bool stopped = false;
      for (const Event& ev : events) {
        if (ev.fires(t, y)) {
          traj.stop = {StopKind::event, ev.name};
          stopped = true;
          break;
        }
      }
      if (stopped) break;
    } else {
      ++traj.stats.rejected;
      const double shrink = finite ? std::clamp(cfg.safety * std::pow(err, -0.2), 0.2, 1.0) : 0.2;
      dt = h * shrink;
      last_rejected = true;
      if (dt < cfg.dt_min) {
        if (!finite) throw NumericError("integrate: non-finite state persists below dt_min at t=" + std::to_string(t));
        traj.stop = {StopKind::dt_underflow, {}};
        break;
      }
    }
  }

  if (traj.times.back() < t) {
    traj.times.push_back(t);
    traj.states.push_back(y);
  }
  traj.final_time = t;
  traj.final_state = std::move(y);
  return traj;
}

}  // namespace wavemodels
