// graph_models.hpp
// Right-hand sides of the graph-based interface models: viscous (shear),
// odd-viscosity, inviscid and internal-wave families in bidirectional and
// unidirectional form, plus closed-form single-mode solutions of their
// linearizations.
//
// Bidirectional models are first-order systems in (h, v = h_t). The
// unidirectional forms evolve the far-field profile f (f = Lambda h for surface
// waves, f = d_1 zeta for internal waves) and require a zero-mean f.

#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "wavemodels/error.hpp"
#include "wavemodels/model_id.hpp"
#include "wavemodels/spectral.hpp"

namespace wavemodels {

/// Physical and dimensionless constants shared by all models.
struct ModelParams {
  double epsilon = 0.1;  // steepness
  double beta = 0.0;     // surface tension (dimensionless)
  double alpha1 = 0.0;   // shear viscosity
  double alpha2 = 0.0;
  double alpha = 0.0;    // odd viscosity
  double atwood = -1.0;
  double gravity = 1.0;
  double surface_tension = 0.0;  // gamma in [p] = gamma K (curve models)
  std::optional<double> rho_plus;
  std::optional<double> rho_minus;

  void validate() const {
    auto finite_nonneg = [](double x, const char* key) {
      if (!std::isfinite(x) || x < 0.0) throw ParameterError(std::string(key) + " must be finite and >= 0");
    };
    finite_nonneg(epsilon, "epsilon");
    finite_nonneg(beta, "beta");
    finite_nonneg(alpha1, "alpha1");
    finite_nonneg(alpha2, "alpha2");
    finite_nonneg(alpha, "alpha");
    finite_nonneg(gravity, "gravity");
    finite_nonneg(surface_tension, "surface_tension");
    if (!std::isfinite(atwood) || std::abs(atwood) > 1.0) throw ParameterError("atwood must lie in [-1, 1]");
    if (rho_plus) finite_nonneg(*rho_plus, "rho_plus");
    if (rho_minus) finite_nonneg(*rho_minus, "rho_minus");
    if (rho_plus && rho_minus) {
      const double sum = *rho_plus + *rho_minus;
      if (!(sum > 0.0)) throw ParameterError("rho_plus + rho_minus must be positive");
      const double a = (*rho_plus - *rho_minus) / sum;
      if (std::abs(a - atwood) > 1e-9) {
        throw ParameterError("atwood is inconsistent with rho_plus/rho_minus (expected " + std::to_string(a) + ")");
      }
    }
  }

  /// rho+ + rho-; without densities the jump term is normalized so that 2[p]/(rho+ + rho-) = [p].
  double density_sum() const {
    if (rho_plus && rho_minus) return *rho_plus + *rho_minus;
    return 2.0;
  }
};

struct GraphState {
  SpectralField h;
  SpectralField v;
};

struct WaveProfile {
  SpectralField f;
};

/// (h, w) for the first-order internal-wave system.
struct ElevationVorticity {
  SpectralField h;
  SpectralField w;
};

enum class ViscousUniForm { reduced, full };

namespace detail {

inline void require_same_grid(const GraphState& s) { s.h.check_same_grid(s.v); }

inline void require_zero_mean(const SpectralField& f) {
  const double scale = std::max(1.0, f.max_abs());
  if (std::abs(f.mean()) > 1e-10 * scale) {
    throw PreconditionError("unidirectional profile must have zero mean (mean = " + std::to_string(f.mean()) + ")");
  }
}

inline void require_unidirectional_epsilon(const ModelParams& p) {
  if (!(p.epsilon > 0.0)) throw ParameterError("unidirectional forms need epsilon > 0");
}

inline Complex sgn(double k) { return k > 0.0 ? 1.0 : (k < 0.0 ? -1.0 : 0.0); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Viscous (shear) models
// ---------------------------------------------------------------------------

inline GraphState rhs_viscous(const GraphState& s, const ModelParams& p) {
  p.validate();
  detail::require_same_grid(s);
  const SpectralField& h = s.h;
  const SpectralField& v = s.v;
  const double a1 = p.alpha1, a2 = p.alpha2;
  const Symbol H = Symbol::hilbert();
  const Symbol D2 = Symbol::derivative(2);

  SpectralField vt = (a1 + a2) * derivative(v, 2) - lambda(h) - p.beta * lambda_pow(h, 3.0) -
                     a1 * a2 * derivative(h, 4);

  if (p.epsilon != 0.0) {
    const SpectralField Hv = hilbert(v);
    const SpectralField lam_h = lambda(h);
    const SpectralField d2h = derivative(h, 2);
    SpectralField nl = -lambda(dealiased_product(Hv, Hv)) + derivative(commutator(H, h, lam_h));
    if (p.beta != 0.0) nl += p.beta * derivative(commutator(H, h, lambda_pow(h, 3.0)));
    if (a2 != 0.0) {
      const SpectralField Hd2h = hilbert(d2h);
      nl += a2 * derivative(commutator(H, Hv, Hd2h));
      nl += a2 * lambda(dealiased_product(Hv, Hd2h));
      nl -= a2 * a2 * derivative(commutator(H, d2h, d2h));
    }
    if (a1 * a2 != 0.0) nl += a1 * a2 * derivative(commutator(D2, h, lambda(derivative(h))));
    if (a1 != 0.0) nl -= a1 * derivative(commutator(D2, h, Hv));
    vt += p.epsilon * nl;
  }
  return {v, std::move(vt)};
}

inline WaveProfile rhs_viscous(const WaveProfile& s, const ModelParams& p,
                               ViscousUniForm form = ViscousUniForm::reduced) {
  p.validate();
  detail::require_unidirectional_epsilon(p);
  detail::require_zero_mean(s.f);
  const SpectralField& f = s.f;
  const double a1 = p.alpha1, a2 = p.alpha2;
  const Symbol N = Symbol::resolvent_n(a1, a2);
  const Symbol H = Symbol::hilbert();
  const Symbol D1 = Symbol::derivative(1);
  const Symbol D2 = Symbol::derivative(2);
  const Symbol D3 = Symbol::derivative(3);

  const Symbol linear = N * (D1 + Complex(a1 + a2) * D2 + H + Complex(-p.beta) * (H * D2) + Complex(a1 * a2) * D3);
  SpectralField rhs = apply_symbol(f, linear);

  const SpectralField inv_lam_f = lambda_pow(f, -1.0);
  const SpectralField df = derivative(f);
  SpectralField braces = 2.0 * dealiased_product(f, df) + lambda(commutator(H, inv_lam_f, f));
  if (p.beta != 0.0) braces += p.beta * lambda(commutator(H, inv_lam_f, lambda_pow(f, 2.0)));
  if (a2 != 0.0) {
    braces -= a2 * lambda(commutator(H, f, df));
    braces += a2 * derivative(dealiased_product(f, df));
  }
  if (a1 != 0.0) braces += a1 * lambda(commutator(D2, inv_lam_f, f));
  if (form == ViscousUniForm::full) {
    if (a1 * a2 != 0.0) braces += a1 * a2 * lambda(commutator(D2, inv_lam_f, df));
    if (a2 != 0.0) {
      const SpectralField lam_f = lambda(f);
      braces -= a2 * a2 * lambda(commutator(H, lam_f, lam_f));
    }
  }
  rhs -= p.epsilon * apply_symbol(braces, N);
  return {rhs / (2.0 * p.epsilon)};
}

// ---------------------------------------------------------------------------
// Odd-viscosity models
// ---------------------------------------------------------------------------

inline GraphState rhs_odd(const GraphState& s, const ModelParams& p) {
  p.validate();
  detail::require_same_grid(s);
  const SpectralField& h = s.h;
  const SpectralField& v = s.v;
  const Symbol H = Symbol::hilbert();

  const SpectralField lam_dv = lambda(derivative(v));
  SpectralField vt = -lambda(h) - p.beta * lambda_pow(h, 3.0) + p.alpha * lam_dv;
  if (p.epsilon != 0.0) {
    const SpectralField Hv = hilbert(v);
    SpectralField nl = -lambda(dealiased_product(Hv, Hv)) + derivative(commutator(H, h, lambda(h)));
    SpectralField tail = -p.alpha * commutator(H, h, lam_dv);
    if (p.beta != 0.0) tail += p.beta * commutator(H, h, lambda_pow(h, 3.0));
    nl += derivative(tail);
    vt += p.epsilon * nl;
  }
  return {v, std::move(vt)};
}

inline WaveProfile rhs_odd(const WaveProfile& s, const ModelParams& p) {
  p.validate();
  detail::require_unidirectional_epsilon(p);
  detail::require_zero_mean(s.f);
  const SpectralField& f = s.f;
  const Symbol M = Symbol::resolvent_m(p.alpha);
  const Symbol H = Symbol::hilbert();
  const double amb = p.alpha - p.beta;

  const Symbol linear = M * (Symbol::derivative(1) + H + Complex(amb) * (H * Symbol::derivative(2)));
  SpectralField rhs = apply_symbol(f, linear);

  const SpectralField inv_lam_f = lambda_pow(f, -1.0);
  SpectralField braces = -2.0 * dealiased_product(f, derivative(f)) - lambda(commutator(H, inv_lam_f, f));
  if (amb != 0.0) braces += amb * lambda(commutator(H, inv_lam_f, lambda_pow(f, 2.0)));
  rhs += p.epsilon * apply_symbol(braces, M);
  return {rhs / p.epsilon};
}

// ---------------------------------------------------------------------------
// Inviscid models
// ---------------------------------------------------------------------------

inline GraphState rhs_inviscid(const GraphState& s, const ModelParams& p) {
  p.validate();
  detail::require_same_grid(s);
  const SpectralField& h = s.h;
  const SpectralField& v = s.v;
  const Symbol H = Symbol::hilbert();

  SpectralField vt = -lambda(h) - p.beta * lambda_pow(h, 3.0);
  if (p.epsilon != 0.0) {
    const SpectralField Hv = hilbert(v);
    SpectralField nl = -lambda(dealiased_product(Hv, Hv)) + derivative(commutator(H, h, lambda(h)));
    if (p.beta != 0.0) nl += p.beta * derivative(commutator(H, h, lambda_pow(h, 3.0)));
    vt += p.epsilon * nl;
  }
  return {v, std::move(vt)};
}

inline WaveProfile rhs_inviscid(const WaveProfile& s, const ModelParams& p) {
  p.validate();
  detail::require_unidirectional_epsilon(p);
  detail::require_zero_mean(s.f);
  const SpectralField& f = s.f;
  const Symbol H = Symbol::hilbert();

  const Symbol linear = Symbol::derivative(1) + H + Complex(-p.beta) * (H * Symbol::derivative(2));
  SpectralField rhs = apply_symbol(f, linear);

  const SpectralField inv_lam_f = lambda_pow(f, -1.0);
  SpectralField braces = 2.0 * dealiased_product(f, derivative(f)) + lambda(commutator(H, inv_lam_f, f));
  if (p.beta != 0.0) braces += p.beta * lambda(commutator(H, inv_lam_f, lambda_pow(f, 2.0)));
  rhs -= p.epsilon * braces;
  return {rhs / (2.0 * p.epsilon)};
}

// ---------------------------------------------------------------------------
// Internal waves
// ---------------------------------------------------------------------------

inline GraphState rhs_internal(const GraphState& s, const ModelParams& p) {
  p.validate();
  detail::require_same_grid(s);
  const SpectralField& h = s.h;
  const SpectralField& v = s.v;
  const double A = p.atwood;
  SpectralField vt = A * lambda(h) - p.beta * lambda_pow(h, 3.0);
  if (A != 0.0) vt -= A * derivative(dealiased_product(hilbert(v), v));
  return {v, std::move(vt)};
}

inline WaveProfile rhs_internal(const WaveProfile& s, const ModelParams& p) {
  p.validate();
  detail::require_unidirectional_epsilon(p);
  detail::require_zero_mean(s.f);
  const SpectralField& f = s.f;
  const double A = p.atwood;
  const Symbol H = Symbol::hilbert();

  const Symbol linear = Symbol::derivative(1) + Complex(-A) * H + Complex(-p.beta) * (H * Symbol::derivative(2));
  SpectralField rhs = apply_symbol(f, linear);
  if (A != 0.0) rhs += A * p.epsilon * derivative(dealiased_product(hilbert(f), f));
  return {rhs / (2.0 * p.epsilon)};
}

/// h_t = H w / 2, w_t = -d[(A/4)(Hw)^2 - (A/4) w^2 - 2 A g h]; the jump-pressure term is not used for graphs.
inline ElevationVorticity rhs_internal(const ElevationVorticity& s, const ModelParams& p) {
  p.validate();
  s.h.check_same_grid(s.w);
  const double A = p.atwood;
  const SpectralField Hw = hilbert(s.w);
  SpectralField bracket = (0.25 * A) * (dealiased_product(Hw, Hw) - dealiased_product(s.w, s.w)) -
                          (2.0 * A * p.gravity) * s.h;
  return {0.5 * Hw, -derivative(bracket)};
}

// ---------------------------------------------------------------------------
// Linearized single-mode solutions
// ---------------------------------------------------------------------------

/// lambda^2 + damping * lambda + stiffness = 0 for the linearized bidirectional models.
struct CharacteristicPolynomial {
  Complex damping;
  Complex stiffness;
};

inline CharacteristicPolynomial characteristic_polynomial(ModelId model, double kappa, const ModelParams& p) {
  const double ak = std::abs(kappa);
  switch (model) {
    case ModelId::viscous_bi:
      return {(p.alpha1 + p.alpha2) * kappa * kappa,
              ak + p.beta * ak * ak * ak + p.alpha1 * p.alpha2 * kappa * kappa * kappa * kappa};
    case ModelId::odd_bi:
      // alpha Lambda d_1 h_t moves to the left as -alpha |k| (ik) lambda
      return {Complex(0.0, -p.alpha * ak * kappa), ak + p.beta * ak * ak * ak};
    case ModelId::inviscid_bi:
      return {0.0, ak + p.beta * ak * ak * ak};
    case ModelId::internal_bi:
      return {0.0, -p.atwood * ak + p.beta * ak * ak * ak};
    case ModelId::internal_sys:
      return {0.0, -p.atwood * p.gravity * ak};
    default:
      throw UsageError("no second-order linearization for model " + to_string(model));
  }
}

/// Growth factor sigma(k) of the linear unidirectional equation f^_t = sigma f^.
inline Complex unidirectional_rate(ModelId model, double kappa, const ModelParams& p) {
  if (!(p.epsilon > 0.0)) throw ParameterError("unidirectional forms need epsilon > 0");
  const Complex ik(0.0, kappa);
  const Complex hk = Complex(0.0, -1.0) * detail::sgn(kappa);
  switch (model) {
    case ModelId::viscous_uni:
    case ModelId::viscous_uni_full: {
      const double c = 0.5 * (p.alpha1 + p.alpha2);
      const Complex n_sym = (1.0 - c * ik) / (1.0 + c * c * kappa * kappa);
      return n_sym * (ik + (p.alpha1 + p.alpha2) * ik * ik + hk - p.beta * hk * ik * ik + p.alpha1 * p.alpha2 * ik * ik * ik) /
             (2.0 * p.epsilon);
    }
    case ModelId::odd_uni:
      return (ik + hk + (p.alpha - p.beta) * hk * ik * ik) / ((2.0 + p.alpha * std::abs(kappa)) * p.epsilon);
    case ModelId::inviscid_uni:
      return (ik + hk - p.beta * hk * ik * ik) / (2.0 * p.epsilon);
    case ModelId::internal_uni:
      return (ik - p.atwood * hk - p.beta * hk * ik * ik) / (2.0 * p.epsilon);
    default:
      throw UsageError("no unidirectional linearization for model " + to_string(model));
  }
}

/// Complex amplitudes of the exp(ikx) coefficient.
struct ModeAmplitudes {
  Complex h;
  Complex v;
};

/// Exact solution of the linearized model for the exp(ikx) coefficient with initial (h0, v0).
/// Unidirectional models evolve h0 as the profile amplitude and report v = f_t.
inline ModeAmplitudes linear_mode_solution(ModelId model, int k, const ModelParams& p, double t, Complex h0, Complex v0,
                                           double length = kTwoPi) {
  if (k == 0) throw PreconditionError("linear_mode_solution needs k != 0");
  const double kappa = kTwoPi * k / length;
  if (state_kind(model) == StateKind::profile) {
    const Complex sigma = unidirectional_rate(model, kappa, p);
    const Complex f = h0 * std::exp(sigma * t);
    return {f, sigma * f};
  }
  const auto [D, Omega] = characteristic_polynomial(model, kappa, p);
  const Complex disc = std::sqrt(D * D - 4.0 * Omega);
  const Complex lp = 0.5 * (-D + disc);
  const Complex lm = 0.5 * (-D - disc);
  const double scale = std::max({1.0, std::abs(D), std::sqrt(std::abs(Omega))});
  if (std::abs(disc) <= 1e-10 * scale) {
    // repeated root: h = (c0 + c1 t) e^{lambda t}
    const Complex lam = -0.5 * D;
    const Complex c1 = v0 - lam * h0;
    const Complex e = std::exp(lam * t);
    return {(h0 + c1 * t) * e, (lam * (h0 + c1 * t) + c1) * e};
  }
  const Complex cp = (v0 - lm * h0) / (lp - lm);
  const Complex cm = h0 - cp;
  const Complex ep = std::exp(lp * t);
  const Complex em = std::exp(lm * t);
  return {cp * ep + cm * em, cp * lp * ep + cm * lm * em};
}

}  // namespace wavemodels
