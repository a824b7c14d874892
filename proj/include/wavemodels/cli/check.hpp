// cli/check.hpp
// Invariant suite behind `wavemodels check`. Each check reports its measured
// error against a tolerance; fast checks use small grids.

#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "wavemodels/cli/config.hpp"
#include "wavemodels/diagnostics.hpp"
#include "wavemodels/evolution.hpp"

namespace wavemodels::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  double error = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct CheckReport {
  std::string level;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

namespace checks {

inline SpectralField random_field(const PeriodicGrid& g, std::mt19937_64& rng, int kmax) {
  std::normal_distribution<double> nd;
  std::vector<double> a(static_cast<std::size_t>(kmax + 1)), b(a.size());
  for (int k = 1; k <= kmax; ++k) {
    a[static_cast<std::size_t>(k)] = nd(rng) / k;
    b[static_cast<std::size_t>(k)] = nd(rng) / k;
  }
  return SpectralField::sample(g, [&](double x) {
    double v = 0.0;
    for (int k = 1; k <= kmax; ++k) v += a[static_cast<std::size_t>(k)] * std::cos(k * x) + b[static_cast<std::size_t>(k)] * std::sin(k * x);
    return v;
  });
}

inline CheckResult bounded(std::string name, double err, double tol) {
  return {std::move(name), err <= tol, err, tol, {}};
}

inline CheckResult hilbert_sign() {
  const PeriodicGrid g = make_grid(32);
  const auto c = SpectralField::sample(g, [](double x) { return std::cos(3 * x); });
  const auto s = SpectralField::sample(g, [](double x) { return std::sin(3 * x); });
  return bounded("hilbert-sign: H cos 3x = sin 3x", max_abs_difference(hilbert(c), s), 1e-13);
}

inline CheckResult hilbert_involution(std::mt19937_64& rng) {
  const PeriodicGrid g = make_grid(64);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const SpectralField f = random_field(g, rng, 20);
    worst = std::max(worst, max_abs_difference(hilbert(hilbert(f)), -1.0 * remove_mean(f)) / f.max_abs());
  }
  return bounded("hilbert-involution: HHf = -f", worst, 1e-12);
}

inline CheckResult lambda_is_h_derivative(std::mt19937_64& rng) {
  const PeriodicGrid g = make_grid(64);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const SpectralField f = random_field(g, rng, 20);
    worst = std::max(worst, max_abs_difference(lambda(f), hilbert(derivative(f))) / lambda(f).max_abs());
  }
  return bounded("lambda: Lambda f = H d f", worst, 1e-12);
}

inline CheckResult tricomi(std::mt19937_64& rng) {
  const PeriodicGrid g = make_grid(64);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    // products of modes up to 15 stay below the Nyquist mode 32
    const SpectralField f = random_field(g, rng, 15);
    const SpectralField hf = hilbert(f);
    const SpectralField lhs = 2.0 * hilbert(pointwise_product(f, hf));
    const SpectralField rhs = remove_mean(pointwise_product(hf, hf) - pointwise_product(f, f));
    worst = std::max(worst, max_abs_difference(lhs, rhs) / std::max(1.0, rhs.max_abs()));
  }
  return bounded("tricomi: 2H(f Hf) = (Hf)^2 - f^2", worst, 1e-10);
}

inline CheckResult dealias_product() {
  const PeriodicGrid g = make_grid(32);
  const auto a = SpectralField::sample(g, [](double x) { return std::sin(2 * x); });
  const auto b = SpectralField::sample(g, [](double x) { return std::sin(3 * x); });
  const auto expect = SpectralField::sample(g, [](double x) { return 0.5 * (std::cos(x) - std::cos(5 * x)); });
  return bounded("dealias: product of resolved modes is exact", max_abs_difference(dealiased_product(a, b), expect),
                 1e-14);
}

inline CheckResult perp_convention() {
  const Vec2 v = perp(Vec2{1.0, 0.0});
  return bounded("perp: (1,0)^perp = (0,-1)", std::hypot(v.x, v.y + 1.0), 0.0);
}

inline CheckResult circle_curvature() {
  const PeriodicGrid g = make_grid(64);
  const double err = max_abs_difference(curvature(circle_curve(g)), SpectralField::constant(g, 1.0));
  return bounded("curvature: unit circle has K = +1", err, 1e-12);
}

inline CheckResult laurent_circle() {
  const PeriodicGrid g = make_grid(64);
  const CurveState c = circle_curve(g);
  const LaurentCoeffs L = laurent_coeffs(c);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double a = g.node(j);
    err = std::max({err, std::abs(L.o_minus1.x[j] + std::cos(a)), std::abs(L.o_minus1.y[j] + std::sin(a)),
                    std::abs(L.o_zero.x[j] - 0.5 * std::sin(a)), std::abs(L.o_zero.y[j] + 0.5 * std::cos(a)),
                    std::abs(L.o_one.x[j] - std::cos(a) / 12), std::abs(L.o_one.y[j] - std::sin(a) / 12)});
  }
  return bounded("laurent: unit circle coefficients", err, 1e-10);
}

inline CheckResult refined_kh_correction() {
  const PeriodicGrid g = make_grid(64);
  const CurveState c = circle_curve(g);
  const auto w = SpectralField::sample(g, [](double a) { return std::sin(a); });
  const PlanarField corr = refined_kh_rhs(c, w) - kh_rhs(c, w);
  const PlanarField o1 = laurent_coeffs(c).o_one;
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    err = std::max({err, std::abs(corr.x[j] + o1.x[j]), std::abs(corr.y[j] + o1.y[j])});
  }
  return bounded("refined-kh: w0 = sin gives correction -O1", err, 1e-12);
}

inline CheckResult br_uniform_circle(std::size_t n) {
  const PeriodicGrid g = make_grid(n);
  const double c = 0.7;
  const PlanarField u = br_velocity(circle_curve(g), SpectralField::constant(g, c));
  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = g.node(j);
    const double normal = u.x[j] * std::cos(a) + u.y[j] * std::sin(a);
    const double tangential = -u.x[j] * std::sin(a) + u.y[j] * std::cos(a);
    err = std::max({err, std::abs(normal), std::abs(std::abs(tangential) - c / 2)});
  }
  return bounded("br: uniform circle moves tangentially at c/2 (N=" + std::to_string(n) + ")", err, 1e-10);
}

inline CheckResult integrator_orders() {
  const Rhs decay = [](double, const State& y) { return State{-y[0]}; };
  auto slope = [&](bool dopri, std::vector<int> counts) {
    std::vector<double> dts, errs;
    for (int steps : counts) {
      State y{1.0};
      const double dt = 1.0 / steps;
      for (int i = 0; i < steps; ++i) y = dopri ? step_dopri5(decay, y, i * dt, dt).y : step_rk4(decay, y, i * dt, dt);
      dts.push_back(dt);
      errs.push_back(std::abs(y[0] - std::exp(-1.0)));
    }
    return loglog_slope(dts, errs);
  };
  const double p5 = slope(true, {4, 8, 16, 32});
  const double p4 = slope(false, {10, 20, 40, 80});
  CheckResult r{"integrator: DP5 order >= 4.8, RK4 slope in [3.8, 4.2]", p5 >= 4.8 && p4 >= 3.8 && p4 <= 4.2,
                std::max(std::max(0.0, 4.8 - p5), std::max(0.0, std::abs(p4 - 4.0) - 0.2)), 0.0, {}};
  r.note = "dp5=" + std::to_string(p5) + " rk4=" + std::to_string(p4);
  return r;
}

inline CheckResult linear_dispersion() {
  const PeriodicGrid g = make_grid(32);
  ModelParams p;
  p.epsilon = 0.0;
  p.beta = 0.5;
  const int k = 2;
  const auto h0 = SpectralField::sample(g, [](double x) { return std::cos(2 * x); });
  const Trajectory tr = integrate(make_rhs(ModelId::inviscid_bi, g, p), pack({h0, SpectralField(g)}), 0.0, 1.0, {});
  const Complex expect = linear_mode_solution(ModelId::inviscid_bi, k, p, 1.0, 0.5, 0.0).h;
  const Complex got = unpack(tr.final_state, g, 2)[0].spectrum().coefficient(k);
  return bounded("linear: inviscid-bi single mode at t=1", std::abs(got - expect) / std::abs(expect), 1e-6);
}

inline CheckResult mean_conservation(std::mt19937_64& rng) {
  const PeriodicGrid g = make_grid(64);
  ModelParams p;
  p.atwood = 1.0;
  p.epsilon = 1.0;
  const SpectralField f0 = 0.1 * random_field(g, rng, 4);
  const Trajectory tr = integrate(make_rhs(ModelId::internal_uni, g, p), pack({f0}), 0.0, 0.5, {});
  return bounded("mean: internal-uni conserves the mean", std::abs(SpectralField(g, tr.final_state).mean()), 1e-12);
}

inline CheckResult self_intersection() {
  const PeriodicGrid g = make_grid(128);
  // shifted so the crossing falls between nodes
  const CurveState eight{SpectralField::sample(g, [](double a) { return std::sin(2 * a + 0.02); }),
                         SpectralField::sample(g, [](double a) { return std::sin(a + 0.01); }), SpectralField(g)};
  const bool ok = self_intersects(eight) && !self_intersects(circle_curve(g));
  return {"geometry: figure-eight crosses, circle does not", ok, ok ? 0.0 : 1.0, 0.0, {}};
}

inline CheckResult config_fixed_point() {
  bool ok = true;
  for (const auto& p : presets()) {
    const std::string once = dump_resolved(p.config);
    ok = ok && dump_resolved(parse_config(once)) == once;
  }
  return {"config: resolved dump parses back to itself", ok, ok ? 0.0 : 1.0, 0.0, {}};
}

inline CheckResult br_refinement() {
  auto sample = [](std::size_t n) {
    const PeriodicGrid g = make_grid(n);
    const CurveState c{SpectralField::sample(g, [](double a) { return 2 * std::cos(a); }),
                       SpectralField::sample(g, [](double a) { return std::sin(a); }), SpectralField(g)};
    return br_velocity(c, SpectralField::sample(g, [](double a) { return std::cos(a) + 0.3 * std::sin(2 * a); }));
  };
  const PlanarField a = sample(256), b = sample(512);
  double err = 0.0;
  for (std::size_t j = 0; j < 256; ++j) {
    err = std::max({err, std::abs(a.x[j] - b.x[2 * j]), std::abs(a.y[j] - b.y[2 * j])});
  }
  return bounded("br: doubling N from 256 changes the velocity by < 1e-8", err, 1e-8);
}

/// sup |n.(br - kh)| / sup |n.kh| on the ellipse (2 cos a, sin a) with w = cos(m a).
inline double br_kh_normal_gap(std::size_t n, int m) {
  const PeriodicGrid g = make_grid(n);
  const CurveState c{SpectralField::sample(g, [](double a) { return 2 * std::cos(a); }),
                     SpectralField::sample(g, [](double a) { return std::sin(a); }), SpectralField(g)};
  const auto w = SpectralField::sample(g, [m](double a) { return std::cos(m * a); });
  const PlanarField br = br_velocity(c, w), kh = kh_rhs(c, w);
  const PlanarField nrm = perp(PlanarField{derivative(c.z1), derivative(c.z2)});
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = std::hypot(nrm.x[j], nrm.y[j]);
    const double nb = (br.x[j] * nrm.x[j] + br.y[j] * nrm.y[j]) / s;
    const double nk = (kh.x[j] * nrm.x[j] + kh.y[j] * nrm.y[j]) / s;
    num = std::max(num, std::abs(nb - nk));
    den = std::max(den, std::abs(nk));
  }
  return num / den;
}

inline CheckResult br_kh_localization() {
  std::vector<double> gaps;
  for (int m : {4, 8, 16, 32}) gaps.push_back(br_kh_normal_gap(512, m));
  const double inc = max_relative_increase(gaps);
  CheckResult r{"br-vs-kh: normal gap decreases over m = 4, 8, 16, 32", inc == 0.0, inc, 0.0, {}};
  r.note = "gap(m=32)=" + std::to_string(gaps.back());
  return r;
}

inline CheckResult h1_decay(double beta) {
  const PeriodicGrid g = make_grid(128);
  ModelParams p;
  p.epsilon = p.alpha1 = p.alpha2 = 1.0;
  p.beta = beta;
  IntegratorConfig cfg;
  cfg.abs_tol = 1e-12;
  NormSeries h1{"h1", {}, {}};
  const auto f0 = SpectralField::sample(g, [](double x) { return 0.01 * std::sin(x); });
  integrate(make_rhs(ModelId::viscous_uni, g, p), pack({f0}), 0.0, 10.0, cfg, {}, 0.0,
            [&](double t, const State& y) { h1.push(t, sobolev_norm(SpectralField(g, y), 1.0)); });
  const double inc = max_relative_increase(h1.values);
  const double rate = decay_fit(h1, 1.0, 10.0).rate;
  const double linear = unidirectional_rate(ModelId::viscous_uni, 1.0, p).real();
  const double rel = std::abs(rate - linear) / std::abs(linear);
  CheckResult r{"h1-decay monitor (beta=" + std::to_string(static_cast<int>(beta)) + ")", inc <= 1e-8 && rel <= 0.2,
                std::max(inc, rel), 0.2, {}};
  r.note = "max increase " + std::to_string(inc) + ", rate " + std::to_string(rate) + " vs " + std::to_string(linear);
  return r;
}

inline CheckResult strip_persistence() {
  const PeriodicGrid g = make_grid(128);
  ModelParams p;
  p.epsilon = p.atwood = 1.0;
  p.beta = 0.0;
  const auto f0 = SpectralField::sample(g, [](double x) { return 0.05 * std::sin(x); });
  const StripMonitor mon = make_strip_monitor(f0);
  const double t_end = 0.9 * mon.horizon;
  std::vector<double> vals;
  integrate(make_rhs(ModelId::internal_uni, g, p), pack({f0}), 0.0, t_end, {}, {}, 0.0,
            [&](double t, const State& y) { vals.push_back(wiener_norm(SpectralField(g, y), mon.nu(t))); });
  const double inc = max_relative_increase(vals);
  CheckResult r{"strip-persistence monitor", inc <= 1e-6, inc, 1e-6, {}};
  r.note = "horizon " + std::to_string(mon.horizon) + ", " + std::to_string(vals.size()) + " samples";
  return r;
}

}  // namespace checks

/// Runs the fast suite, plus the O(n^2) quadrature and the decay and strip monitors when full is set.
inline CheckReport run_checks(bool full, std::uint64_t seed = 20240601) {
  std::mt19937_64 rng(seed);
  CheckReport rep;
  rep.level = full ? "full" : "fast";
  auto guarded = [&](const std::string& name, const std::function<CheckResult()>& fn) {
    try {
      rep.checks.push_back(fn());
    } catch (const std::exception& e) {
      rep.checks.push_back({name, false, INFINITY, 0.0, std::string("threw: ") + e.what()});
    }
  };
  guarded("hilbert-sign", checks::hilbert_sign);
  guarded("hilbert-involution", [&] { return checks::hilbert_involution(rng); });
  guarded("lambda", [&] { return checks::lambda_is_h_derivative(rng); });
  guarded("tricomi", [&] { return checks::tricomi(rng); });
  guarded("dealias", checks::dealias_product);
  guarded("perp", checks::perp_convention);
  guarded("curvature", checks::circle_curvature);
  guarded("laurent", checks::laurent_circle);
  guarded("refined-kh", checks::refined_kh_correction);
  guarded("br-circle", [] { return checks::br_uniform_circle(64); });
  guarded("integrator", checks::integrator_orders);
  guarded("linear", checks::linear_dispersion);
  guarded("mean", [&] { return checks::mean_conservation(rng); });
  guarded("geometry", checks::self_intersection);
  guarded("config", checks::config_fixed_point);
  if (full) {
    guarded("br-circle-512", [] { return checks::br_uniform_circle(512); });
    guarded("br-refinement", checks::br_refinement);
    guarded("br-vs-kh", checks::br_kh_localization);
    guarded("h1-decay", [] { return checks::h1_decay(0.0); });
    guarded("h1-decay", [] { return checks::h1_decay(1.0); });
    guarded("strip-persistence", checks::strip_persistence);
  }
  return rep;
}

inline Json to_json(const CheckReport& rep) {
  Json j;
  j["level"] = rep.level;
  j["passed"] = rep.passed();
  Json list = Json::array();
  for (const auto& c : rep.checks) {
    Json o;
    o["name"] = c.name;
    o["passed"] = c.passed;
    o["error"] = std::isfinite(c.error) ? Json(c.error) : Json(nullptr);
    o["tolerance"] = c.tolerance;
    if (!c.note.empty()) o["note"] = c.note;
    list.push_back(o);
  }
  j["checks"] = list;
  return j;
}

}  // namespace wavemodels::cli
