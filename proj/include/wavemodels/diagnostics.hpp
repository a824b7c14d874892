// diagnostics.hpp
// Norms and monitors: Sobolev and Wiener norms, the shrinking analytic strip,
// curve geometry detectors and exponential decay fits.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "wavemodels/curve_models.hpp"
#include "wavemodels/error.hpp"
#include "wavemodels/spectral.hpp"
#include "wavemodels/timestep.hpp"

namespace wavemodels {

struct NormSeries {
  std::string label;
  std::vector<double> times;
  std::vector<double> values;

  void push(double t, double v) {
    times.push_back(t);
    values.push_back(v);
  }
  std::size_t size() const { return times.size(); }
};

namespace detail {

// Multiplicity of half-spectrum index k in the full two-sided sum.
inline double mode_weight(std::size_t k, std::size_t nyq) { return (k == 0 || k == nyq) ? 1.0 : 2.0; }

}  // namespace detail

/// ||f||_{H^s} = (L * sum_k (1 + kappa^2)^s |f^(k)|^2)^(1/2); s = 0 is the L^2 norm over one period.
inline double sobolev_norm(const SpectralField& f, double s) {
  const PeriodicGrid& grid = f.grid();
  const Spectrum sp = f.spectrum();
  const std::size_t nyq = static_cast<std::size_t>(grid.nyquist());
  double acc = 0.0;
  for (std::size_t k = 0; k <= nyq; ++k) {
    const double kap = grid.wavenumber(static_cast<int>(k));
    acc += detail::mode_weight(k, nyq) * std::pow(1.0 + kap * kap, s) * std::norm(sp[k]);
  }
  return std::sqrt(grid.length() * acc);
}

struct WienerOptions {
  // Coefficients at or below relative_floor * max|f^(k)| are roundoff, which e^{nu|k|} would amplify.
  double relative_floor = 1e-13;
  // Highest |k| included; negative means the dealiased band |k| <= n/3.
  int max_mode = -1;
};

/// sum_k e^{nu |kappa|} |f^(k)| over the resolved modes.
inline double wiener_norm(const SpectralField& f, double nu, const WienerOptions& opt = {}) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw NumericError("wiener_norm needs a finite nu >= 0");
  const PeriodicGrid& grid = f.grid();
  const int nyq = grid.nyquist();
  const int top = std::min(opt.max_mode < 0 ? grid.dealias_cutoff() : opt.max_mode, nyq);
  const double exponent = nu * std::abs(grid.wavenumber(top));
  if (exponent > 700.0) {
    throw NumericError("wiener_norm: nu * k_max = " + std::to_string(exponent) + " exceeds the exponent budget");
  }
  const Spectrum sp = f.spectrum();
  double peak = 0.0;
  for (int k = 0; k <= top; ++k) peak = std::max(peak, std::abs(sp[static_cast<std::size_t>(k)]));
  const double floor = opt.relative_floor * peak;
  double acc = 0.0;
  for (int k = 0; k <= top; ++k) {
    const double a = std::abs(sp[static_cast<std::size_t>(k)]);
    if (a <= floor) continue;
    acc += detail::mode_weight(static_cast<std::size_t>(k), static_cast<std::size_t>(nyq)) *
           std::exp(nu * std::abs(grid.wavenumber(k))) * a;
  }
  return acc;
}

/// nu(t) = nu0 - shrink_rate * t with shrink_rate = 4 ||f0||_{A_1}.
struct StripMonitor {
  double nu0 = 1.0;
  double shrink_rate = 0.0;
  double horizon = std::numeric_limits<double>::infinity();

  double nu(double t) const { return nu0 - shrink_rate * t; }
};

inline StripMonitor make_strip_monitor(const SpectralField& f0, const WienerOptions& opt = {}) {
  StripMonitor m;
  m.shrink_rate = 4.0 * wiener_norm(f0, 1.0, opt);
  if (m.shrink_rate > 0.0) m.horizon = m.nu0 / m.shrink_rate;
  return m;
}

/// t -> ||f(t)||_{A_nu(t)} for every stored sample with t < horizon.
/// The trajectory states are the nodal values of a single profile on `grid`.
inline NormSeries strip_monitor(const Trajectory& traj, const PeriodicGrid& grid, const SpectralField& f0,
                                const WienerOptions& opt = {}) {
  const StripMonitor m = make_strip_monitor(f0, opt);
  NormSeries out{"wiener-strip", {}, {}};
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    if (!(t < m.horizon)) break;
    out.push(t, wiener_norm(SpectralField(grid, traj.states[i]), m.nu(t), opt));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Curve geometry
// ---------------------------------------------------------------------------

/// max over node pairs of |alpha_j - alpha_l|_torus / |z_j - z_l|; +inf if two nodes coincide.
inline double arc_chord(const CurveState& c) {
  const PeriodicGrid& grid = c.grid();
  const std::size_t n = grid.size();
  const double L = grid.length();
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = j + 1; l < n; ++l) {
      const double dx = c.z1[j] - c.z1[l];
      const double dy = c.z2[j] - c.z2[l];
      const double chord = std::hypot(dx, dy);
      double arc = grid.spacing() * static_cast<double>(l - j);
      arc = std::min(arc, L - arc);
      if (chord == 0.0) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, arc / chord);
    }
  }
  return worst;
}

inline double max_curvature(const CurveState& c) { return curvature(c).max_abs(); }

namespace detail {

inline double orient(double ax, double ay, double bx, double by, double cx, double cy) {
  return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

inline bool segments_cross(const CurveState& c, std::size_t i, std::size_t j) {
  const std::size_t n = c.grid().size();
  const std::size_t i2 = (i + 1) % n, j2 = (j + 1) % n;
  const double o1 = orient(c.z1[i], c.z2[i], c.z1[i2], c.z2[i2], c.z1[j], c.z2[j]);
  const double o2 = orient(c.z1[i], c.z2[i], c.z1[i2], c.z2[i2], c.z1[j2], c.z2[j2]);
  const double o3 = orient(c.z1[j], c.z2[j], c.z1[j2], c.z2[j2], c.z1[i], c.z2[i]);
  const double o4 = orient(c.z1[j], c.z2[j], c.z1[j2], c.z2[j2], c.z1[i2], c.z2[i2]);
  return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
}

inline bool adjacent_segments(std::size_t i, std::size_t j, std::size_t n) {
  return i == j || (i + 1) % n == j || (j + 1) % n == i;
}

}  // namespace detail

/// True iff two non-adjacent edges of the node polygon cross properly.
/// Edges are swept in order of their left x-extent so only overlapping pairs are tested.
inline bool self_intersects(const CurveState& c) {
  const std::size_t n = c.grid().size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto xmin = [&](std::size_t i) { return std::min(c.z1[i], c.z1[(i + 1) % n]); };
  auto xmax = [&](std::size_t i) { return std::max(c.z1[i], c.z1[(i + 1) % n]); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double xa = xmin(a), xb = xmin(b);
    return xa < xb || (xa == xb && a < b);
  });
  std::vector<std::size_t> active;
  for (std::size_t i : order) {
    const double left = xmin(i);
    std::erase_if(active, [&](std::size_t a) { return xmax(a) < left; });
    for (std::size_t a : active) {
      if (!detail::adjacent_segments(a, i, n) && detail::segments_cross(c, a, i)) return true;
    }
    active.push_back(i);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Fits and monotonicity
// ---------------------------------------------------------------------------

struct DecayFit {
  double rate = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of log(values) = log C + rate * t over samples with t in [t_a, t_b].
inline DecayFit decay_fit(const NormSeries& s, double t_a, double t_b) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.times[i] < t_a || s.times[i] > t_b) continue;
    if (!(s.values[i] > 0.0)) throw FitError("decay_fit: nonpositive value at t=" + std::to_string(s.times[i]));
    xs.push_back(s.times[i]);
    ys.push_back(std::log(s.values[i]));
  }
  if (xs.size() < 2) throw FitError("decay_fit: fewer than two samples in the window");
  const double m = static_cast<double>(xs.size());
  const double xbar = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  const double ybar = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
    syy += (ys[i] - ybar) * (ys[i] - ybar);
  }
  if (!(sxx > 0.0)) throw FitError("decay_fit: degenerate time window");
  DecayFit fit;
  fit.rate = sxy / sxx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

/// Largest relative increase max_i (v[i+1] - v[i]) / |v[i]| (0 for a nonincreasing series).
inline double max_relative_increase(const std::vector<double>& v) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double base = std::abs(v[i]);
    const double inc = v[i + 1] - v[i];
    if (inc <= 0.0) continue;
    worst = std::max(worst, base > 0.0 ? inc / base : std::numeric_limits<double>::infinity());
  }
  return worst;
}

inline bool is_nonincreasing(const std::vector<double>& v, double rel_slack) {
  return max_relative_increase(v) <= rel_slack;
}

/// Slope of log(y) against log(x) by least squares.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw FitError("loglog_slope needs matching series of length >= 2");
  NormSeries s{"", {}, {}};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw FitError("loglog_slope: nonpositive abscissa");
    s.push(std::log(x[i]), y[i]);
  }
  return decay_fit(s, -INFINITY, INFINITY).rate;
}

}  // namespace wavemodels
