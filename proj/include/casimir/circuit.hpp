#pragma once

// LC circuit whose capacitor is filled with the dispersive medium:
// C(omega, a) = (C0 / a) eps(omega), eigenfrequency omega^2 L C(omega) = 1.

#include <cmath>
#include <optional>
#include <stdexcept>

#include "casimir/dispersion.hpp"
#include "casimir/engine.hpp"

namespace casimir::circuit {

using dispersion::LorentzModel;
using engine::Tolerance;

struct CircuitSpec {
  double L = 1.0;
  double C0 = 1.0;  // capacitance at unit separation without the medium
  double a = 1.0;
  std::optional<LorentzModel> medium;  // empty: nondispersive, eps = 1
  double phi_sq = 1.0;                 // mean-square potential
  double delta = 0.05;                 // resonance exclusion for the bracket

  void validate() const {
    if (!(L > 0.0) || !(C0 > 0.0) || !(a > 0.0)) throw std::invalid_argument("circuit requires L, C0, a > 0");
    if (!(phi_sq >= 0.0)) throw std::invalid_argument("phi_sq must be >= 0");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (medium) medium->validate();
  }
};

inline double capacitance(const CircuitSpec& s, double omega, double a) {
  const double eps = s.medium ? dispersion::detail::lorentz(*s.medium, omega) : 1.0;
  return s.C0 / a * eps;
}

/// (d C / d omega) at fixed separation, analytic.
inline double dC_domega(const CircuitSpec& s, double omega, double a) {
  if (!s.medium) return 0.0;
  const auto& m = *s.medium;
  const double w02 = m.omega0 * m.omega0;
  const double den = 1.0 - omega * omega / w02;
  return s.C0 / a * (m.eps_bar - 1.0) * (2.0 * omega / w02) / (den * den);
}

namespace detail {

inline double solve_frequency(const CircuitSpec& s, double a, const Tolerance& tol) {
  auto f = [&](double w) { return w * w * s.L * capacitance(s, w, a) - 1.0; };
  double hi;
  if (s.medium) {
    hi = s.medium->omega0 * (1.0 - s.delta);
  } else {
    hi = 2.0 / std::sqrt(s.L * s.C0 / a);
  }
  if (!(f(hi) > 0.0)) {
    throw std::domain_error("eigenfrequency: no root below the resonance window");
  }
  return engine::find_root(f, 0.0, hi, tol);
}

}  // namespace detail

/// Lowest positive root of omega^2 L C(omega) = 1.
inline double eigenfrequency(const CircuitSpec& spec, const Tolerance& tol = {1e-15, 0.0, 200}) {
  spec.validate();
  return detail::solve_frequency(spec, spec.a, tol);
}

struct CircuitEnergy {
  double value = 0.0;
  double omega_star = 0.0;
  double capacitance = 0.0;
  double dC_domega = 0.0;
  double dC_domega_fd = 0.0;  // finite-difference cross-check
  double capacitor_half = 0.0;  // C phi^2 / 2
  double inductor_half = 0.0;   // L J^2 / 2 with J^2 = omega^2 C^2 phi^2
};

/// W = (1/(2 omega)) d(omega^2 C)/d omega phi^2 = (C + omega C'/2) phi^2 at the eigenfrequency.
inline CircuitEnergy circuit_energy(const CircuitSpec& spec, const Tolerance& tol = {1e-15, 0.0, 200}) {
  const double w = eigenfrequency(spec, tol);
  CircuitEnergy out;
  out.omega_star = w;
  out.capacitance = capacitance(spec, w, spec.a);
  out.dC_domega = dC_domega(spec, w, spec.a);
  out.dC_domega_fd =
      engine::richardson_diff([&](double x) { return capacitance(spec, x, spec.a); }, w, 1e-6 * std::max(w, 1.0)).value;
  out.value = (out.capacitance + 0.5 * w * out.dC_domega) * spec.phi_sq;
  out.capacitor_half = 0.5 * out.capacitance * spec.phi_sq;
  const double j_sq = w * w * out.capacitance * out.capacitance * spec.phi_sq;
  out.inductor_half = 0.5 * spec.L * j_sq;
  return out;
}

struct AdiabaticCheck {
  double lhs = 0.0;  // W delta_omega / omega with the re-solved frequency shift
  double rhs = 0.0;  // -phi^2 (delta C)_static / 2
  double delta_C_static = 0.0;
  double delta_omega_solved = 0.0;
  double delta_omega_linear = 0.0;  // from delta(omega^2 C) = 0 at first order
  double delta_C_total = 0.0;       // C(omega', a') - C(omega, a)
  double delta_C_linear = 0.0;      // (delta C)_static + C' delta_omega_linear
};

/// Moves the plate a -> a(1 + delta_a_rel) with W/omega held fixed and compares
/// the energy change with the static-capacitance work -phi^2 (delta C)_st / 2.
/// The two agree to first order; frequency derivatives drop out of the force.
inline AdiabaticCheck adiabatic_variation_check(const CircuitSpec& spec, double delta_a_rel,
                                                const Tolerance& tol = {1e-15, 0.0, 200}) {
  spec.validate();
  if (!(delta_a_rel > 0.0 && delta_a_rel < 0.5)) {
    throw std::invalid_argument("delta_a_rel must be small and positive");
  }
  const auto e = circuit_energy(spec, tol);
  const double w = e.omega_star;
  const double a2 = spec.a * (1.0 + delta_a_rel);
  const double w2 = detail::solve_frequency(spec, a2, tol);

  AdiabaticCheck out;
  out.delta_C_static = capacitance(spec, w, a2) - e.capacitance;
  out.delta_omega_solved = w2 - w;
  out.delta_omega_linear = -w * out.delta_C_static / (2.0 * e.capacitance + w * e.dC_domega);
  out.delta_C_total = capacitance(spec, w2, a2) - e.capacitance;
  out.delta_C_linear = out.delta_C_static + e.dC_domega * out.delta_omega_linear;
  out.lhs = e.value * out.delta_omega_solved / w;
  out.rhs = -0.5 * spec.phi_sq * out.delta_C_static;
  return out;
}

}  // namespace casimir::circuit
