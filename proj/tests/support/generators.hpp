// Seeded generators for property tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wavemodels/spectral.hpp"

namespace testsupport {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Random real trigonometric polynomial with modes 1..kmax (plus an optional mean),
  /// coefficients decaying like 1/k.
  wavemodels::SpectralField band_limited(const wavemodels::PeriodicGrid& grid, int kmax, bool zero_mean = true) {
    std::vector<double> a(static_cast<std::size_t>(kmax) + 1), b(a.size());
    for (int k = 1; k <= kmax; ++k) {
      a[static_cast<std::size_t>(k)] = uniform(-1.0, 1.0) / k;
      b[static_cast<std::size_t>(k)] = uniform(-1.0, 1.0) / k;
    }
    const double mean = zero_mean ? 0.0 : uniform(-1.0, 1.0);
    return wavemodels::SpectralField::sample(grid, [&](double x) {
      double s = mean;
      for (int k = 1; k <= kmax; ++k) {
        s += a[static_cast<std::size_t>(k)] * std::cos(k * x) + b[static_cast<std::size_t>(k)] * std::sin(k * x);
      }
      return s;
    });
  }

  /// Arbitrary (not band-limited) nodal values.
  wavemodels::SpectralField noise(const wavemodels::PeriodicGrid& grid) {
    std::vector<double> v(grid.size());
    for (double& x : v) x = uniform(-1.0, 1.0);
    return wavemodels::SpectralField(grid, std::move(v));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testsupport
