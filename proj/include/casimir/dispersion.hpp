#pragma once

// Weakly dispersive, nondissipative medium with a single Lorentz resonance:
//   eps(omega) = 1 + (eps_bar - 1) / (1 - omega^2 / omega0^2),   mu = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "casimir/engine.hpp"
#include "casimir/green_em.hpp"
#include "casimir/types.hpp"

namespace casimir::dispersion {

using engine::Tolerance;
using std::numbers::pi;

struct LorentzModel {
  double eps_bar = 2.0;
  double omega0 = 10.0;

  // eps_bar = 1 is accepted as the vacuum limit.
  void validate() const {
    if (!(eps_bar >= 1.0) || !std::isfinite(eps_bar)) throw std::invalid_argument("eps_bar must be >= 1");
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw std::invalid_argument("omega0 must be > 0");
  }
};

struct CutoffSpec {
  double omega_max = 100.0;
  double delta = 0.05;  // relative half-width of the excluded resonance window

  void validate() const {
    if (!(omega_max > 0.0) || !std::isfinite(omega_max)) throw std::invalid_argument("omega_max must be finite and > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("resonance half-width must lie in (0, 1)");
  }
};

namespace detail {

// Unchecked real-axis formula; infinite exactly at resonance.
inline double lorentz(const LorentzModel& m, double omega) {
  const double r = omega / m.omega0;
  return 1.0 + (m.eps_bar - 1.0) / (1.0 - r * r);
}

}  // namespace detail

/// Real-frequency permittivity. Throws inside |omega/omega0 - 1| <= delta,
/// where absorption cannot be neglected.
inline double eps_of_omega(const LorentzModel& model, double omega, double delta = 0.05) {
  model.validate();
  if (std::isinf(omega)) return 1.0;
  if (std::abs(std::abs(omega) / model.omega0 - 1.0) <= delta) {
    throw std::domain_error("eps_of_omega: frequency inside the excluded resonance window");
  }
  return detail::lorentz(model, omega);
}

/// eps(i zeta) = 1 + (eps_bar - 1)/(1 + zeta^2/omega0^2), in (1, eps_bar].
inline double eps_imag(const LorentzModel& model, double zeta) {
  const double r = zeta / model.omega0;
  return 1.0 + (model.eps_bar - 1.0) / (1.0 + r * r);
}

/// d eps / d omega on the real axis.
inline double deps_domega(const LorentzModel& model, double omega, double delta = 0.05) {
  (void)eps_of_omega(model, omega, delta);
  const double w02 = model.omega0 * model.omega0;
  const double den = 1.0 - omega * omega / w02;
  return (model.eps_bar - 1.0) * (2.0 * omega / w02) / (den * den);
}

/// Which solution of n(omega) omega = k to return.
enum class Branch {
  lower,   // omega in (0, omega0), connected to the static index
  upper,   // omega in (omega0 sqrt(eps_bar), inf), where eps in (0, 1)
  photon,  // lower for k < omega0, upper otherwise; tends to omega = k at large k
};

/// Root of sqrt(eps(omega)) omega = k on the requested branch.
inline double dispersive_mode_solve(const LorentzModel& model, double k, const Tolerance& tol = {1e-14, 0.0, 200},
                                    Branch branch = Branch::lower) {
  model.validate();
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("dispersive_mode_solve requires finite k > 0");
  }
  if (branch == Branch::photon) {
    branch = k < model.omega0 ? Branch::lower : Branch::upper;
  }
  const double w0 = model.omega0;
  if (model.eps_bar == 1.0) {
    if (branch == Branch::lower && k >= w0) {
      throw std::domain_error("dispersive_mode_solve: no lower-branch root for k >= omega0 in vacuum");
    }
    return k;
  }
  // eps omega^2 - k^2 has the same roots as n omega - k and no square root.
  auto f = [&](double omega) { return detail::lorentz(model, omega) * omega * omega - k * k; };

  if (branch == Branch::lower) {
    double eta = 0.1;
    double hi = w0 * (1.0 - eta);
    while (!(f(hi) > 0.0)) {
      eta *= 0.1;
      if (eta < 1e-15) {
        throw std::domain_error("dispersive_mode_solve: cannot bracket the lower-branch root");
      }
      hi = w0 * (1.0 - eta);
    }
    return engine::find_root(f, 0.0, hi, tol);
  }

  const double lo = w0 * std::sqrt(model.eps_bar);  // eps = 0 here
  double hi = std::max(2.0 * lo, 2.0 * k);
  for (int i = 0; !(f(hi) > 0.0); ++i) {
    if (i > 200) throw std::domain_error("dispersive_mode_solve: cannot bracket the upper-branch root");
    hi *= 2.0;
  }
  return engine::find_root(f, lo, hi, tol);
}

/// Index n = k / omega seen by a mode of wave number k on the given branch.
inline double mode_index(const LorentzModel& model, double k, Branch branch = Branch::photon) {
  return k / dispersive_mode_solve(model, k, {1e-14, 0.0, 200}, branch);
}

/// Explicit prefactor 2a(eps_bar - 1)/omega0^2 of the frequency-derivative energy.
inline double w2_prefactor(const LorentzModel& model, double a) {
  return 2.0 * a * (model.eps_bar - 1.0) / (model.omega0 * model.omega0);
}

/// Frequency windows kept in the real-axis integral: below the resonance
/// window, and above both the window and the stop band where eps < 0.
inline std::vector<std::array<double, 2>> allowed_windows(const LorentzModel& model, const CutoffSpec& cut) {
  std::vector<std::array<double, 2>> out;
  const double w0 = model.omega0;
  const double below = std::min(w0 * (1.0 - cut.delta), cut.omega_max);
  if (below > 0.0) out.push_back({0.0, below});
  const double above = std::max(w0 * (1.0 + cut.delta), w0 * std::sqrt(model.eps_bar));
  if (cut.omega_max > above) out.push_back({above, cut.omega_max});
  return out;
}

/// prefactor * int dw/(2 pi) w^2/(1 - w^2/w0^2)^2 S(w) over the allowed
/// windows, where S(w) is the transverse-integrated field spectrum. Extra
/// breakpoints (discontinuities of S) may be supplied.
template <engine::RealFunction Spectrum>
EnergyValue w2_from_spectrum(const LorentzModel& model, double a, const CutoffSpec& cut, const Spectrum& spectrum,
                             const std::vector<double>& breakpoints = {}, const Tolerance& tol = engine::kQuadTolerance) {
  model.validate();
  cut.validate();
  const double w02 = model.omega0 * model.omega0;
  auto integrand = [&](double w) {
    const double den = 1.0 - w * w / w02;
    return w * w / (den * den) * spectrum(w) / (2.0 * pi);
  };
  double total = 0.0;
  double err = 0.0;
  bool ok = true;
  for (const auto& win : allowed_windows(model, cut)) {
    std::vector<double> edges{win[0]};
    for (double b : breakpoints)
      if (b > win[0] && b < win[1]) edges.push_back(b);
    edges.push_back(win[1]);
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      if (!(edges[i + 1] > edges[i])) continue;
      const auto r = engine::adaptive_quad(integrand, edges[i], edges[i + 1], tol);
      total += r.value;
      err += r.err_estimate;
      ok = ok && r.converged;
    }
  }
  const double pre = w2_prefactor(model, a);
  return {pre * total, std::abs(pre) * err, Method::quadrature, ok};
}

/// Which axis the field spectrum of the frequency-derivative energy is taken on.
enum class SpectralAxis {
  real,       // mode-counting spectrum on the real axis; grows with the cutoff
  imaginary,  // rotated spectrum with eps(i zeta); exponentially damped
};

struct W2Result {
  EnergyValue energy;
  std::array<double, 3> omega_max{};  // omega_max, 2 omega_max, 4 omega_max
  std::array<double, 3> scan{};
  double delta = 0.05;
};

namespace detail {

// Real axis: int d^2k/(2pi)^2 <E^2>_{omega k} = omega^2 N(omega) / (2a),
// N(omega) = 1/2 + #{m >= 1 : n(omega) omega > pi m / a} where eps > 0.
// Returns the mode thresholds below `omega_max` as breakpoints.
inline std::vector<double> mode_thresholds(const LorentzModel& model, double a, const CutoffSpec& cut) {
  std::vector<double> out;
  const auto windows = allowed_windows(model, cut);
  for (std::size_t m = 1;; ++m) {
    const double k = pi * static_cast<double>(m) / a;
    bool any = false;
    if (model.eps_bar > 1.0) {
      // lower branch reaches every k; keep it if it lands in the first window
      const double wl = dispersive_mode_solve(model, k, {1e-14, 0.0, 200}, Branch::lower);
      if (!windows.empty() && wl < windows.front()[1] && windows.front()[0] == 0.0) {
        out.push_back(wl);
        any = true;
      }
      const double wu = dispersive_mode_solve(model, k, {1e-14, 0.0, 200}, Branch::upper);
      if (wu < cut.omega_max) {
        out.push_back(wu);
        any = true;
      }
    } else if (k < cut.omega_max) {
      out.push_back(k);
      any = true;
    }
    if (!any) break;
    if (m > 10'000'000) throw std::domain_error("w2: too many modes below the cutoff");
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double mode_count(const LorentzModel& model, double a, double omega) {
  const double eps = lorentz(model, omega);
  if (!(eps > 0.0)) return 0.0;
  const double kmax = std::sqrt(eps) * omega;
  return 0.5 + std::floor(kmax * a / pi);
}

inline EnergyValue w2_real(const LorentzModel& model, double a, const CutoffSpec& cut, const Tolerance& tol) {
  const auto breaks = mode_thresholds(model, a, cut);
  auto spectrum = [&](double w) { return w * w * mode_count(model, a, w) / (2.0 * a); };
  return w2_from_spectrum(model, a, cut, spectrum, breaks, tol);
}

// Imaginary axis: w -> i zeta in the prefactor, the transverse-integrated
// spectrum int k dk/(2 pi) 2 zeta^2 n^2 ... reduces to -ln(1 - e^{-2 n zeta a})/(2a).
inline EnergyValue w2_imaginary(const LorentzModel& model, double a, const CutoffSpec& cut, const Tolerance& tol) {
  model.validate();
  cut.validate();
  const double w02 = model.omega0 * model.omega0;
  auto integrand = [&](double zeta) {
    const double den = 1.0 + zeta * zeta / w02;
    const double n = std::sqrt(eps_imag(model, zeta));
    const double x = 2.0 * n * zeta * a;
    const double inner = -std::log1p(-std::exp(-x)) / (2.0 * a);
    return 2.0 * zeta * zeta * zeta * zeta / (den * den) * inner / (4.0 * pi * pi);
  };
  const auto r = engine::adaptive_quad(integrand, 0.0, cut.omega_max, tol);
  const double pre = w2_prefactor(model, a);
  return {pre * r.value, std::abs(pre) * r.err_estimate, Method::quadrature, r.converged};
}

}  // namespace detail

/// Frequency-derivative part of the dispersive field energy per unit area,
/// truncated at omega_max with the resonance window removed. The scan at
/// omega_max, 2 omega_max, 4 omega_max shows whether it settles.
inline W2Result w2_density_cutoff(const LorentzModel& model, const CavityConfig& cfg, const CutoffSpec& cut,
                                  const Tolerance& tol = engine::kQuadTolerance,
                                  SpectralAxis axis = SpectralAxis::real) {
  cfg.validate();
  model.validate();
  cut.validate();
  W2Result out;
  out.delta = cut.delta;
  bool ok = true;
  for (int i = 0; i < 3; ++i) {
    CutoffSpec c = cut;
    c.omega_max = cut.omega_max * static_cast<double>(1 << i);
    const auto v = axis == SpectralAxis::real ? detail::w2_real(model, cfg.a, c, tol)
                                              : detail::w2_imaginary(model, cfg.a, c, tol);
    out.omega_max[i] = c.omega_max;
    out.scan[i] = v.value;
    ok = ok && v.converged;
    if (i == 0) out.energy = v;
  }
  out.energy.converged = ok;
  return out;
}

/// Energy with the nondispersive density and n^2 -> eps(i zeta), T = 0.
inline EnergyValue w_I_energy(const LorentzModel& model, const CavityConfig& cfg,
                              const Tolerance& tol = engine::kQuadTolerance) {
  model.validate();
  cfg.validate();
  if (cfg.T != 0.0) {
    throw std::domain_error("w_I_energy is implemented at T = 0 only");
  }
  return green_em::detail::zero_temperature_energy(cfg.a, [&model](double zeta) { return eps_imag(model, zeta); },
                                                   tol);
}

}  // namespace casimir::dispersion
