// spectral.hpp
// Periodic collocation grid, Fourier round trip and the multiplier calculus
// (Hilbert transform, fractional Laplacian powers, derivatives, resolvents),
// 2/3-rule dealiased products and commutators.
//
// Fourier convention: f^(k) = (1/n) sum_j f(x_j) exp(-i kappa_k x_j) with
// kappa_k = 2 pi k / length, k in {-n/2, ..., n/2-1}. A real field is stored
// through its half spectrum k = 0..n/2 (the negative modes are conjugates).

#pragma once

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wavemodels/error.hpp"

namespace wavemodels {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// PeriodicGrid
// ---------------------------------------------------------------------------

/// Uniform collocation grid on [-length/2, length/2) with a power-of-two node count >= 8.
class PeriodicGrid {
 public:
  explicit PeriodicGrid(std::size_t n_nodes, double length = kTwoPi) : n_(n_nodes), length_(length) {
    if (n_nodes < 8 || !std::has_single_bit(n_nodes)) {
      throw ConfigError("node count must be a power of two >= 8, got " + std::to_string(n_nodes),
                        "n_nodes");
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw ConfigError("domain length must be positive and finite", "length");
    }
  }

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / static_cast<double>(n_); }
  double node(std::size_t j) const noexcept { return -0.5 * length_ + static_cast<double>(j) * spacing(); }

  std::vector<double> nodes() const {
    std::vector<double> x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = node(j);
    return x;
  }

  /// Number of stored half-spectrum coefficients (k = 0..n/2).
  std::size_t mode_count() const noexcept { return n_ / 2 + 1; }
  int nyquist() const noexcept { return static_cast<int>(n_ / 2); }

  /// Largest |k| retained by the 2/3 rule (3|k| <= n).
  int dealias_cutoff() const noexcept { return static_cast<int>(n_ / 3); }

  double wavenumber(int k) const noexcept { return kTwoPi * static_cast<double>(k) / length_; }

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  std::size_t n_;
  double length_;
};

inline PeriodicGrid make_grid(std::size_t n_nodes, double length = kTwoPi) {
  return PeriodicGrid(n_nodes, length);
}

// ---------------------------------------------------------------------------
// FFT backend
// ---------------------------------------------------------------------------

namespace detail {

class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    std::vector<double> real(n);
    std::vector<Complex> half(n / 2 + 1);
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_r2c_1d(size, real.data(), as_fftw(half.data()), flags);
    backward_ = fftw_plan_dft_c2r_1d(size, as_fftw(half.data()), real.data(), flags);
    if (forward_ == nullptr || backward_ == nullptr) throw NumericError("FFTW planning failed");
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  // Plan execution with new arrays is thread safe; planning is not (guarded by plan_for).
  void forward(std::span<const double> in, std::span<Complex> out) const {
    std::vector<double> scratch(in.begin(), in.end());
    fftw_execute_dft_r2c(forward_, scratch.data(), as_fftw(out.data()));
  }

  // c2r destroys its input, so work on a copy.
  void backward(std::span<const Complex> in, std::span<double> out) const {
    std::vector<Complex> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(backward_, as_fftw(scratch.data()), out.data());
  }

  std::size_t size() const noexcept { return n_; }

 private:
  static fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

  std::size_t n_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

inline const FftPlan& plan_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

inline double alternating_sign(std::size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Spectrum / SpectralField
// ---------------------------------------------------------------------------

/// Half spectrum (k = 0..n/2) of a real field. Hermitian symmetry is implicit.
class Spectrum {
 public:
  explicit Spectrum(PeriodicGrid grid) : grid_(grid), half_(grid.mode_count()) {}
  Spectrum(PeriodicGrid grid, std::vector<Complex> half) : grid_(grid), half_(std::move(half)) {
    if (half_.size() != grid_.mode_count()) throw UsageError("half spectrum size does not match grid");
  }

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return half_.size(); }

  Complex& operator[](std::size_t k) { return half_[k]; }
  const Complex& operator[](std::size_t k) const { return half_[k]; }

  /// Coefficient at signed wavenumber k in [-n/2, n/2-1]; negative modes are conjugates.
  Complex coefficient(int k) const {
    const int nyq = grid_.nyquist();
    if (k < -nyq || k >= nyq) throw UsageError("wavenumber outside resolved range");
    if (k == -nyq) return half_[static_cast<std::size_t>(nyq)];
    if (k < 0) return std::conj(half_[static_cast<std::size_t>(-k)]);
    return half_[static_cast<std::size_t>(k)];
  }

  std::span<const Complex> half() const noexcept { return half_; }
  std::span<Complex> half() noexcept { return half_; }

 private:
  PeriodicGrid grid_;
  std::vector<Complex> half_;
};

/// Real scalar field sampled on a PeriodicGrid.
class SpectralField {
 public:
  explicit SpectralField(PeriodicGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}

  SpectralField(PeriodicGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw UsageError("value count does not match grid size");
    if (!all_finite()) throw NumericError("non-finite value in field");
  }

  template <class Fn>
  static SpectralField sample(const PeriodicGrid& grid, Fn&& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) v[j] = fn(grid.node(j));
    return SpectralField(grid, std::move(v));
  }

  static SpectralField constant(const PeriodicGrid& grid, double c) {
    return SpectralField(grid, std::vector<double>(grid.size(), c));
  }

  static SpectralField from_spectrum(const Spectrum& s) {
    const PeriodicGrid& grid = s.grid();
    std::vector<Complex> shifted(s.half().begin(), s.half().end());
    for (std::size_t k = 0; k < shifted.size(); ++k) shifted[k] *= detail::alternating_sign(k);
    std::vector<double> v(grid.size());
    detail::plan_for(grid.size()).backward(shifted, v);
    return SpectralField(grid, std::move(v));
  }

  Spectrum spectrum() const {
    std::vector<Complex> half(grid_.mode_count());
    detail::plan_for(grid_.size()).forward(values_, half);
    const double scale = 1.0 / static_cast<double>(grid_.size());
    for (std::size_t k = 0; k < half.size(); ++k) half[k] *= scale * detail::alternating_sign(k);
    return Spectrum(grid_, std::move(half));
  }

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  double& operator[](std::size_t j) { return values_[j]; }

  double mean() const {
    double s = 0.0;
    for (double x : values_) s += x;
    return s / static_cast<double>(values_.size());
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : values_) m = std::max(m, std::abs(x));
    return m;
  }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
  }

  SpectralField& operator+=(const SpectralField& o) {
    check_same_grid(o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check_same_grid(o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
    return *this;
  }
  SpectralField& operator*=(double c) {
    for (double& x : values_) x *= c;
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator-(SpectralField a) { return a *= -1.0; }
  friend SpectralField operator*(double c, SpectralField a) { return a *= c; }
  friend SpectralField operator*(SpectralField a, double c) { return a *= c; }
  friend SpectralField operator/(SpectralField a, double c) { return a *= 1.0 / c; }

  void check_same_grid(const SpectralField& o) const {
    if (!(grid_ == o.grid_)) throw UsageError("fields live on different grids");
  }

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

inline double max_abs_difference(const SpectralField& a, const SpectralField& b) {
  a.check_same_grid(b);
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

/// Raw pointwise product (no dealiasing); for geometric factors that are not quadratic interactions.
inline SpectralField pointwise_product(const SpectralField& a, const SpectralField& b) {
  a.check_same_grid(b);
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) v[j] = a[j] * b[j];
  return SpectralField(a.grid(), std::move(v));
}

template <class Fn>
SpectralField map_values(const SpectralField& a, Fn&& fn) {
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) v[j] = fn(a[j]);
  return SpectralField(a.grid(), std::move(v));
}

inline SpectralField remove_mean(const SpectralField& f) {
  SpectralField out = f;
  const double m = f.mean();
  for (double& x : out.values()) x -= m;
  return out;
}

// ---------------------------------------------------------------------------
// Multiplier symbols
// ---------------------------------------------------------------------------

/// Fourier multiplier k -> sigma(k), evaluated at the physical wavenumber.
class Symbol {
 public:
  using Fn = std::function<Complex(double)>;

  Symbol(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  static Symbol identity() {
    return {"identity", [](double) { return Complex(1.0, 0.0); }};
  }

  /// -i sgn(k), sgn(0) = 0.
  static Symbol hilbert() {
    return {"hilbert", [](double k) {
              if (k > 0.0) return Complex(0.0, -1.0);
              if (k < 0.0) return Complex(0.0, 1.0);
              return Complex(0.0, 0.0);
            }};
  }

  /// |k|^s; the zero mode is annihilated for every s.
  static Symbol lambda_pow(double s) {
    return {"lambda_pow(" + std::to_string(s) + ")", [s](double k) {
              if (k == 0.0) return Complex(0.0, 0.0);
              return Complex(std::pow(std::abs(k), s), 0.0);
            }};
  }

  /// (ik)^m.
  static Symbol derivative(unsigned m) {
    return {"derivative(" + std::to_string(m) + ")", [m](double k) {
              Complex r(1.0, 0.0);
              const Complex ik(0.0, k);
              for (unsigned i = 0; i < m; ++i) r *= ik;
              return r;
            }};
  }

  /// (1 - c^2 d^2)^{-1} (1 - c d), c = (alpha1 + alpha2)/2.
  static Symbol resolvent_n(double alpha1, double alpha2) {
    const double c = 0.5 * (alpha1 + alpha2);
    return {"resolvent_N", [c](double k) { return Complex(1.0, -c * k) / (1.0 + c * c * k * k); }};
  }

  /// (2 + alpha Lambda)^{-1}.
  static Symbol resolvent_m(double alpha) {
    return {"resolvent_M", [alpha](double k) { return Complex(1.0 / (2.0 + alpha * std::abs(k)), 0.0); }};
  }

  /// (1 - d^2)^{-1}.
  static Symbol resolvent_p() {
    return {"resolvent_P", [](double k) { return Complex(1.0 / (1.0 + k * k), 0.0); }};
  }

  Complex operator()(double kappa) const { return fn_(kappa); }
  const std::string& name() const noexcept { return name_; }

  /// Composition of multipliers (they commute).
  friend Symbol operator*(const Symbol& a, const Symbol& b) {
    return {a.name_ + "*" + b.name_, [fa = a.fn_, fb = b.fn_](double k) { return fa(k) * fb(k); }};
  }

  friend Symbol operator+(const Symbol& a, const Symbol& b) {
    return {a.name_ + "+" + b.name_, [fa = a.fn_, fb = b.fn_](double k) { return fa(k) + fb(k); }};
  }

  friend Symbol operator*(Complex c, const Symbol& a) {
    return {a.name_, [c, fa = a.fn_](double k) { return c * fa(k); }};
  }

 private:
  std::string name_;
  Fn fn_;
};

/// Multiply every coefficient by the symbol. At the Nyquist mode only the real part acts.
inline void apply_symbol_inplace(Spectrum& s, const Symbol& sym) {
  const PeriodicGrid& grid = s.grid();
  const std::size_t nyq = static_cast<std::size_t>(grid.nyquist());
  for (std::size_t k = 0; k < nyq; ++k) s[k] *= sym(grid.wavenumber(static_cast<int>(k)));
  s[nyq] *= sym(grid.wavenumber(static_cast<int>(nyq))).real();
}

inline SpectralField apply_symbol(const SpectralField& f, const Symbol& sym) {
  if (!f.all_finite()) throw NumericError("apply_symbol: non-finite input");
  Spectrum s = f.spectrum();
  apply_symbol_inplace(s, sym);
  SpectralField out = SpectralField::from_spectrum(s);
  return out;
}

inline SpectralField hilbert(const SpectralField& f) { return apply_symbol(f, Symbol::hilbert()); }
inline SpectralField lambda(const SpectralField& f) { return apply_symbol(f, Symbol::lambda_pow(1.0)); }
inline SpectralField lambda_pow(const SpectralField& f, double s) { return apply_symbol(f, Symbol::lambda_pow(s)); }
inline SpectralField derivative(const SpectralField& f, unsigned m = 1) {
  return apply_symbol(f, Symbol::derivative(m));
}

// ---------------------------------------------------------------------------
// Dealiasing, products, commutators
// ---------------------------------------------------------------------------

inline void dealias_inplace(Spectrum& s) {
  const int cutoff = s.grid().dealias_cutoff();
  for (std::size_t k = static_cast<std::size_t>(cutoff) + 1; k < s.size(); ++k) s[k] = 0.0;
}

/// Zero all modes with 3|k| > n (2/3 rule), including Nyquist.
inline SpectralField dealias(const SpectralField& f) {
  Spectrum s = f.spectrum();
  dealias_inplace(s);
  return SpectralField::from_spectrum(s);
}

/// Quadratic product with the 2/3 rule applied to both factors and to the result.
inline SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  f.check_same_grid(g);
  const SpectralField ff = dealias(f);
  const SpectralField gg = dealias(g);
  return dealias(pointwise_product(ff, gg));
}

enum class CommutatorKind { hilbert, second_derivative };

/// [T, a] b = T(ab) - a T(b).
inline SpectralField commutator(const Symbol& op, const SpectralField& a, const SpectralField& b) {
  a.check_same_grid(b);
  return apply_symbol(dealiased_product(a, b), op) - dealiased_product(a, apply_symbol(b, op));
}

inline SpectralField commutator(CommutatorKind kind, const SpectralField& a, const SpectralField& b) {
  return commutator(kind == CommutatorKind::hilbert ? Symbol::hilbert() : Symbol::derivative(2), a, b);
}

}  // namespace wavemodels
