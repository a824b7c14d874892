#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "wavemodels/diagnostics.hpp"
#include "wavemodels/evolution.hpp"
#include "wavemodels/timestep.hpp"

using namespace wavemodels;

namespace {

const Rhs decay = [](double, const State& y) { return State{-y[0]}; };
const Rhs rotation = [](double, const State& y) { return State{-y[1], y[0]}; };

}  // namespace

TEST(Integrate, ExponentialDecay) {
  const Trajectory tr = integrate(decay, {1.0}, 0.0, 1.0, IntegratorConfig{});
  EXPECT_EQ(tr.stop.kind, StopKind::reached_tmax);
  EXPECT_DOUBLE_EQ(tr.final_time, 1.0);
  EXPECT_NEAR(tr.final_state[0], std::exp(-1.0), 1e-8);
}

TEST(Integrate, HarmonicOscillatorPeriod) {
  const Trajectory tr = integrate(rotation, {1.0, 0.0}, 0.0, 2 * kPi, IntegratorConfig{});
  EXPECT_NEAR(tr.final_state[0], 1.0, 1e-6);
  EXPECT_NEAR(tr.final_state[1], 0.0, 1e-6);
}

TEST(Integrate, SingleModeInviscidPeriod) {
  const PeriodicGrid g = make_grid(16);
  ModelParams p;
  p.epsilon = 0.0;
  const SpectralField h0 = SpectralField::sample(g, [](double x) { return std::cos(x); });
  const State y0 = pack({h0, SpectralField(g)});
  const Trajectory tr = integrate(make_rhs(ModelId::inviscid_bi, g, p), y0, 0.0, 2 * kPi, IntegratorConfig{});
  const auto f = unpack(tr.final_state, g, 2);
  EXPECT_LT(max_abs_difference(f[0], h0), 1e-6);
  const ModeAmplitudes m = linear_mode_solution(ModelId::inviscid_bi, 1, p, 2 * kPi, 1.0, 0.0);
  EXPECT_NEAR(m.h.real(), 1.0, 1e-12);
}

TEST(Integrate, SamplesAreLinearlyInterpolated) {
  const Rhs line = [](double, const State&) { return State{2.0}; };
  const Trajectory tr = integrate(line, {0.0}, 0.0, 1.0, IntegratorConfig{}, {}, 0.25);
  ASSERT_EQ(tr.times.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(tr.times[i], 0.25 * i, 1e-15);
    EXPECT_NEAR(tr.states[i][0], 0.5 * i, 1e-12);
  }
}

TEST(Integrate, TimesStrictlyIncreasing) {
  const Trajectory tr = integrate(rotation, {1.0, 0.0}, 0.0, 3.0, IntegratorConfig{}, {}, 0.1);
  ASSERT_EQ(tr.times.size(), tr.states.size());
  for (std::size_t i = 1; i < tr.times.size(); ++i) EXPECT_LT(tr.times[i - 1], tr.times[i]);
  EXPECT_DOUBLE_EQ(tr.times.back(), 3.0);
}

TEST(Integrate, EventStopsAtFirstAcceptedStep) {
  const Rhs line = [](double, const State&) { return State{1.0}; };
  IntegratorConfig cfg;
  cfg.dt_max = 0.03;
  const std::vector<Event> events{{"half", [](double, const State& y) { return y[0] > 0.5; }}};
  const Trajectory tr = integrate(line, {0.0}, 0.0, 1.0, cfg, events);
  EXPECT_EQ(tr.stop.kind, StopKind::event);
  EXPECT_EQ(tr.stop.to_string(), "event(half)");
  EXPECT_GT(tr.final_state[0], 0.5);
  ASSERT_GE(tr.states.size(), 2u);
  EXPECT_LE(tr.states[tr.states.size() - 2][0], 0.5);
}

TEST(Integrate, StepUnderflowIsReported) {
  const Rhs stiff = [](double, const State& y) { return State{-1e6 * y[0]}; };
  IntegratorConfig cfg;
  cfg.dt_min = 1e-3;
  cfg.dt_initial = 1e-2;
  const Trajectory tr = integrate(stiff, {1.0}, 0.0, 1.0, cfg);
  EXPECT_EQ(tr.stop.kind, StopKind::dt_underflow);
  EXPECT_EQ(tr.final_time, 0.0);
}

TEST(Integrate, MaxSteps) {
  IntegratorConfig cfg;
  cfg.max_steps = 3;
  cfg.dt_max = 1e-2;
  const Trajectory tr = integrate(decay, {1.0}, 0.0, 1.0, cfg);
  EXPECT_EQ(tr.stop.kind, StopKind::max_steps);
  EXPECT_EQ(tr.stats.accepted, 3);
}

TEST(Integrate, PersistentNanIsNumericError) {
  const Rhs bad = [](double t, const State& y) {
    return State{t > 0.1 ? std::numeric_limits<double>::quiet_NaN() : -y[0]};
  };
  EXPECT_THROW(integrate(bad, {1.0}, 0.0, 1.0, IntegratorConfig{}), NumericError);
  EXPECT_THROW(integrate(decay, {std::numeric_limits<double>::infinity()}, 0.0, 1.0, IntegratorConfig{}),
               NumericError);
}

TEST(Integrate, Deterministic) {
  const Trajectory a = integrate(rotation, {1.0, 0.3}, 0.0, 5.0, IntegratorConfig{}, {}, 0.5);
  const Trajectory b = integrate(rotation, {1.0, 0.3}, 0.0, 5.0, IntegratorConfig{}, {}, 0.5);
  EXPECT_EQ(a.times, b.times);
  EXPECT_EQ(a.states, b.states);
}

TEST(Integrate, ObserverSeesEveryAcceptedStep) {
  long calls = 0;
  const Trajectory tr =
      integrate(decay, {1.0}, 0.0, 1.0, IntegratorConfig{}, {}, 0.5, [&](double, const State&) { ++calls; });
  EXPECT_EQ(calls, tr.stats.accepted + 1);
}

TEST(IntegratorConfig, Validation) {
  IntegratorConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.safety = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.dt_initial = 2.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.rel_tol = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(integrate(decay, {1.0}, 1.0, 1.0, IntegratorConfig{}), UsageError);
}

TEST(StepRk4, TrivialRates) {
  const Rhs zero = [](double, const State& y) { return State(y.size(), 0.0); };
  const Rhs one = [](double, const State&) { return State{1.0}; };
  EXPECT_EQ(step_rk4(zero, {3.5, -1.0}, 0.0, 0.1), (State{3.5, -1.0}));
  EXPECT_DOUBLE_EQ(step_rk4(one, {2.0}, 0.0, 0.1)[0], 2.1);
  EXPECT_THROW(step_rk4(one, {2.0}, 0.0, 0.0), UsageError);
}

TEST(StepRk4, FourthOrder) {
  std::vector<double> dts, errs;
  for (int steps : {10, 20, 40, 80}) {
    State y{1.0};
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) y = step_rk4(decay, y, i * dt, dt);
    dts.push_back(dt);
    errs.push_back(std::abs(y[0] - std::exp(-1.0)));
  }
  const double slope = loglog_slope(dts, errs);
  EXPECT_GE(slope, 3.8);
  EXPECT_LE(slope, 4.2);
}

TEST(StepDopri5, FifthOrderAndErrorEstimate) {
  std::vector<double> dts, errs;
  for (int steps : {4, 8, 16, 32}) {
    State y{1.0};
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) y = step_dopri5(decay, y, i * dt, dt).y;
    dts.push_back(dt);
    errs.push_back(std::abs(y[0] - std::exp(-1.0)));
  }
  EXPECT_GE(loglog_slope(dts, errs), 4.8);
  // the embedded estimate is O(dt^5) per step
  const double e1 = std::abs(step_dopri5(decay, {1.0}, 0.0, 0.1).error[0]);
  const double e2 = std::abs(step_dopri5(decay, {1.0}, 0.0, 0.05).error[0]);
  EXPECT_NEAR(std::log2(e1 / e2), 5.0, 0.3);
}
