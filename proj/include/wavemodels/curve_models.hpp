// curve_models.hpp
// Closed-curve interface dynamics: the z-model, the frozen-circulation
// Kelvin-Helmholtz model and its refinement by the next Laurent coefficient of
// the Birkhoff-Rott kernel, plus a principal-value quadrature of the full
// Birkhoff-Rott velocity used as a reference.
//
// Perpendicular convention: a^perp = (a2, -a1) everywhere.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "wavemodels/error.hpp"
#include "wavemodels/graph_models.hpp"
#include "wavemodels/spectral.hpp"

namespace wavemodels {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 perp(Vec2 a) { return {a.y, -a.x}; }

/// A planar vector at every node.
struct PlanarField {
  SpectralField x;
  SpectralField y;

  Vec2 at(std::size_t j) const { return {x[j], y[j]}; }
};

inline PlanarField perp(const PlanarField& a) { return {a.y, -a.x}; }

inline PlanarField operator*(double c, const PlanarField& a) { return {c * a.x, c * a.y}; }
inline PlanarField operator+(const PlanarField& a, const PlanarField& b) { return {a.x + b.x, a.y + b.y}; }
inline PlanarField operator-(const PlanarField& a, const PlanarField& b) { return {a.x - b.x, a.y - b.y}; }

inline SpectralField dot(const PlanarField& a, const PlanarField& b) {
  return pointwise_product(a.x, b.x) + pointwise_product(a.y, b.y);
}

/// Scale a planar field by a scalar field, node by node.
inline PlanarField scaled(const SpectralField& s, const PlanarField& a) {
  return {pointwise_product(s, a.x), pointwise_product(s, a.y)};
}

/// Closed curve z = (z1, z2) over alpha in [-pi, pi) with vortex-sheet strength w.
struct CurveState {
  SpectralField z1;
  SpectralField z2;
  SpectralField w;

  const PeriodicGrid& grid() const { return z1.grid(); }
};

/// Coefficients of BR(alpha, beta) = O_{-1}/beta + O_0 + O_1 beta + ...
struct LaurentCoeffs {
  PlanarField o_minus1;
  PlanarField o_zero;
  PlanarField o_one;
};

enum class Orientation { counterclockwise, clockwise };

/// Circle of the given radius with w = 0. With a^perp = (a2, -a1), dz^perp points outward
/// for the counterclockwise traversal and inward for the clockwise one.
inline CurveState circle_curve(const PeriodicGrid& grid, double radius = 1.0,
                               Orientation dir = Orientation::counterclockwise) {
  const double s = dir == Orientation::clockwise ? -radius : radius;
  return {SpectralField::sample(grid, [radius](double a) { return radius * std::cos(a); }),
          SpectralField::sample(grid, [s](double a) { return s * std::sin(a); }),
          SpectralField(grid)};
}

namespace detail {

inline PlanarField curve_derivative(const CurveState& c, unsigned m) {
  return {derivative(c.z1, m), derivative(c.z2, m)};
}

/// |dz|^2, rejecting stalled parametrizations.
inline SpectralField checked_speed_squared(const PlanarField& dz) {
  SpectralField s2 = dot(dz, dz);
  double max_s2 = 0.0, min_s2 = INFINITY;
  for (double x : s2.values()) {
    max_s2 = std::max(max_s2, x);
    min_s2 = std::min(min_s2, x);
  }
  if (!(max_s2 > 0.0) || min_s2 <= 1e-24 * max_s2) {
    throw GeometryError("degenerate curve parametrization (|dz/dalpha| vanishes)");
  }
  return s2;
}

inline void require_curve_grids(const CurveState& c) {
  c.z1.check_same_grid(c.z2);
  c.z1.check_same_grid(c.w);
}

}  // namespace detail

/// Signed curvature (counterclockwise unit circle -> +1).
inline SpectralField curvature(const CurveState& c) {
  const PlanarField d1 = detail::curve_derivative(c, 1);
  const PlanarField d2 = detail::curve_derivative(c, 2);
  const SpectralField s2 = detail::checked_speed_squared(d1);
  // -(dz^perp . d2z) = dz1 d2z2 - dz2 d2z1
  const SpectralField num = -dot(perp(d1), d2);
  std::vector<double> k(num.size());
  for (std::size_t j = 0; j < k.size(); ++j) k[j] = num[j] / std::pow(s2[j], 1.5);
  return SpectralField(c.grid(), std::move(k));
}

namespace detail {

struct KernelParts {
  SpectralField inv_speed2;  // 1/|dz|^2
  PlanarField kernel;        // dz^perp/|dz|^2
};

inline KernelParts kernel_parts(const CurveState& c) {
  const PlanarField d1 = curve_derivative(c, 1);
  SpectralField inv_s2 = map_values(checked_speed_squared(d1), [](double x) { return 1.0 / x; });
  PlanarField kernel = scaled(inv_s2, perp(d1));
  return {std::move(inv_s2), std::move(kernel)};
}

}  // namespace detail

/// dz^perp / |dz|^2 (= -O_{-1}), the localized kernel factor of the z-model.
inline PlanarField normal_kernel(const CurveState& c) { return detail::kernel_parts(c).kernel; }

inline LaurentCoeffs laurent_coeffs(const CurveState& c) {
  const PlanarField d1 = detail::curve_derivative(c, 1);
  const PlanarField d2 = detail::curve_derivative(c, 2);
  const PlanarField d3 = detail::curve_derivative(c, 3);
  const SpectralField s2 = detail::checked_speed_squared(d1);
  const SpectralField inv2 = map_values(s2, [](double x) { return 1.0 / x; });
  const SpectralField inv4 = map_values(s2, [](double x) { return 1.0 / (x * x); });
  const SpectralField inv6 = map_values(s2, [](double x) { return 1.0 / (x * x * x); });
  const SpectralField d1d2 = dot(d1, d2);
  const SpectralField d1d3 = dot(d1, d3);
  const SpectralField d2d2 = dot(d2, d2);
  const PlanarField p1 = perp(d1);

  PlanarField o_minus1 = -1.0 * scaled(inv2, p1);

  // The curvature term's sign is kept in its conventional published form; a
  // direct expansion of the kernel gives +1/2 here. O_0 does not enter the
  // refined model.
  PlanarField o_zero = -1.0 * scaled(pointwise_product(inv4, d1d2), p1) - 0.5 * scaled(inv2, perp(d2));

  PlanarField o_one = (-1.0 / 6.0) * scaled(inv2, perp(d3)) + (1.0 / 3.0) * scaled(pointwise_product(inv4, d1d3), p1) +
              0.5 * scaled(pointwise_product(inv4, d1d2), perp(d2)) + 0.25 * scaled(pointwise_product(inv4, d2d2), p1) -
              1.0 * scaled(pointwise_product(inv6, pointwise_product(d1d2, d1d2)), p1);
  return {std::move(o_minus1), std::move(o_zero), std::move(o_one)};
}

/// z-model: z_t = -1/2 H w dz^perp/|dz|^2,
/// w_t = -d[(A/2) H(w Hw)/|dz|^2 - 2[p]/(rho+ + rho-) - 2 A g z2] with [p] = gamma K.
inline CurveState zmodel_rhs(const CurveState& c, const ModelParams& p) {
  p.validate();
  detail::require_curve_grids(c);
  const auto [inv_s2, kernel] = detail::kernel_parts(c);

  const SpectralField Hw = hilbert(c.w);
  CurveState out{-0.5 * dealiased_product(Hw, kernel.x), -0.5 * dealiased_product(Hw, kernel.y),
                 SpectralField(c.grid())};

  const double A = p.atwood;
  SpectralField bracket = (-2.0 * A * p.gravity) * c.z2;
  if (A != 0.0) bracket += (0.5 * A) * dealiased_product(hilbert(dealiased_product(c.w, Hw)), inv_s2);
  if (p.surface_tension != 0.0) bracket -= (2.0 * p.surface_tension / p.density_sum()) * curvature(c);
  out.w = -derivative(bracket);
  return out;
}

/// Frozen-circulation KH model: z_t = -1/2 H w0 dz^perp/|dz|^2.
inline PlanarField kh_rhs(const CurveState& c, const SpectralField& w0) {
  c.z1.check_same_grid(c.z2);
  c.z1.check_same_grid(w0);
  const PlanarField kernel = normal_kernel(c);
  const SpectralField Hw = hilbert(w0);
  return {-0.5 * dealiased_product(Hw, kernel.x), -0.5 * dealiased_product(Hw, kernel.y)};
}

/// m1 = (1/2pi) int w0(beta) beta dbeta over one period, exact for the trigonometric interpolant
/// (Nyquist mode excluded).
inline double first_moment(const SpectralField& w0) {
  const PeriodicGrid& grid = w0.grid();
  const Spectrum s = w0.spectrum();
  double sum = 0.0;
  for (int k = 1; k < grid.nyquist(); ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += 2.0 * sign * s[static_cast<std::size_t>(k)].imag() / grid.wavenumber(k);
  }
  return grid.length() / kTwoPi * sum;
}

/// KH model corrected by the O_1 term of the kernel expansion; requires a zero-mean w0.
inline PlanarField refined_kh_rhs(const CurveState& c, const SpectralField& w0) {
  const double scale = std::max(1.0, w0.max_abs());
  if (std::abs(w0.mean()) > 1e-10 * scale) {
    throw PreconditionError("refined KH model needs a zero-mean vortex-sheet strength");
  }
  const PlanarField base = kh_rhs(c, w0);
  const double m1 = first_moment(w0);
  if (m1 == 0.0) return base;
  const LaurentCoeffs o = laurent_coeffs(c);
  return base - m1 * o.o_one;
}

/// Alternating-point trapezoidal rule for the principal-value Birkhoff-Rott velocity.
inline PlanarField br_velocity(const CurveState& c, const SpectralField& w) {
  c.z1.check_same_grid(c.z2);
  c.z1.check_same_grid(w);
  const PeriodicGrid& grid = c.grid();
  const std::size_t n = grid.size();
  const double weight = 2.0 * grid.spacing() / kTwoPi;
  std::vector<double> ux(n, 0.0), uy(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double sx = 0.0, sy = 0.0;
    for (std::size_t l = (j + 1) % 2; l < n; l += 2) {
      const double dx = c.z1[j] - c.z1[l];
      const double dy = c.z2[j] - c.z2[l];
      const double r2 = dx * dx + dy * dy;
      if (r2 < 1e-24) throw GeometryError("coincident curve nodes in Birkhoff-Rott quadrature");
      sx += w[l] * (-dy) / r2;
      sy += w[l] * dx / r2;
    }
    ux[j] = weight * sx;
    uy[j] = weight * sy;
  }
  return {SpectralField(grid, std::move(ux)), SpectralField(grid, std::move(uy))};
}

}  // namespace wavemodels
