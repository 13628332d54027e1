#pragma once

// Thermodynamics of the ideal-wall cavity filled with a constant-index
// medium: the Matsubara free energy, the internal energy by three
// independent routes, and the low- and high-temperature expansions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/expm1.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "casimir/engine.hpp"
#include "casimir/specfun.hpp"
#include "casimir/types.hpp"

namespace casimir::matsubara {

using engine::Tolerance;
using std::numbers::pi;

namespace detail {

inline void require_positive_temperature(const CavityConfig& cfg, const char* what) {
  cfg.validate();
  if (!(cfg.T > 0.0)) {
    throw std::domain_error(std::string(what) + " requires T > 0");
  }
}

inline Tolerance inner_tolerance(const Tolerance& tol) {
  return {std::min(1e-13, 1e-2 * tol.rel), 0.0, 4000};
}

/// a^2 * integral_{lower}^inf kappa ln(1 - exp(-2 kappa a)) dkappa, dimensionless.
inline engine::NumericResult log_mode_integral(double lower, double a, const Tolerance& inner) {
  const double lower_scaled = 2.0 * lower * a;
  auto integrand = [lower_scaled](double x) {
    const double s = lower_scaled + x;
    return 0.25 * s * std::log1p(-std::exp(-s));
  };
  return engine::adaptive_quad(integrand, 0.0, std::numeric_limits<double>::infinity(), inner);
}

struct ThermalPart {
  double value = 0.0;  // sum_{m=1}^{m_max} of log_mode_integral(n zeta_m)
  double err = 0.0;
  bool converged = true;
};

inline ThermalPart thermal_part(const CavityConfig& cfg, std::int64_t m_max, const Tolerance& inner) {
  ThermalPart out;
  for (std::int64_t m = m_max; m >= 1; --m) {
    const double lower = cfg.n * 2.0 * pi * static_cast<double>(m) * cfg.T;
    const auto r = log_mode_integral(lower, cfg.a, inner);
    out.value += r.value;
    out.err += r.err_estimate;
    out.converged = out.converged && r.converged;
  }
  return out;
}

/// Matsubara index beyond which exp(-4 pi n a T m) has dropped by exp(-45).
inline std::int64_t thermal_cutoff(const CavityConfig& cfg) {
  const double alpha = 4.0 * pi * cfg.reduced_temperature();
  const double m = 1.0 + std::ceil(45.0 / alpha);
  if (m > 1e6) {
    throw std::domain_error("n a T too small for a fixed-range Matsubara sum");
  }
  return static_cast<std::int64_t>(m);
}

/// coth(y) / sinh^2(y), overflow-free for all y > 0.
inline double coth_over_sinh2(double y) {
  const double e = std::exp(-2.0 * y);
  const double one_minus = -std::expm1(-2.0 * y);
  return 4.0 * e * (1.0 + e) / (one_minus * one_minus * one_minus);
}

/// The braced summand of the resummed internal energy at y = pi m / (2 n a T):
///   -3 + y coth y + y^2 / sinh^2 y [1 + y coth y].
template <class Real>
Real resummed_bracket(const Real& y) {
  using std::exp;
  using boost::math::expm1;
  const Real e = exp(-2 * y);
  const Real one_minus = -expm1(Real(-2 * y));
  const Real y_coth = y * (1 + e) / one_minus;
  const Real y2_over_sinh2 = 4 * y * y * e / (one_minus * one_minus);
  return -3 + y_coth + y2_over_sinh2 * (1 + y_coth);
}

/// The same summand with its non-decaying part (-3 + y) removed, so that
/// it decays like y^3 exp(-2y).
template <class Real>
Real resummed_remainder(const Real& y) {
  using std::exp;
  using boost::math::expm1;
  const Real e = exp(-2 * y);
  const Real one_minus = -expm1(Real(-2 * y));
  const Real y_coth = y * (1 + e) / one_minus;
  const Real y_coth_minus_y = 2 * y * e / one_minus;
  const Real y2_over_sinh2 = 4 * y * y * e / (one_minus * one_minus);
  return y_coth_minus_y + y2_over_sinh2 * (1 + y_coth);
}

}  // namespace detail

/// Free energy per unit area,
///   F = (T/pi) sum'_{m>=0} int_{n zeta_m}^inf kappa ln(1 - e^{-2 kappa a}) dkappa,
/// zeta_m = 2 pi m T, with the m = 0 term at half weight.
inline EnergyValue free_energy(const CavityConfig& cfg, const Tolerance& tol = engine::kSeriesTolerance) {
  detail::require_positive_temperature(cfg, "free_energy");
  const Tolerance inner = detail::inner_tolerance(tol);
  const auto zero_mode = detail::log_mode_integral(0.0, cfg.a, inner);

  double quad_err = 0.0;
  bool quad_ok = true;
  auto term = [&](std::int64_t m) {
    const double lower = cfg.n * 2.0 * pi * static_cast<double>(m) * cfg.T;
    const auto r = detail::log_mode_integral(lower, cfg.a, inner);
    quad_err += r.err_estimate;
    quad_ok = quad_ok && r.converged;
    return r.value;
  };
  const auto thermal = engine::sum_series(term, 1, tol);

  const double scale = cfg.T / (pi * cfg.a * cfg.a);
  EnergyValue out;
  out.value = scale * (0.5 * zero_mode.value + thermal.value);
  out.err_estimate = scale * (0.5 * zero_mode.err_estimate + quad_err + thermal.err_estimate);
  out.method = Method::direct_sum;
  out.converged = zero_mode.converged && thermal.converged && quad_ok;
  return out;
}

/// Zero-temperature free energy -pi^2 / (720 n a^3).
inline EnergyValue free_energy_T0(const CavityConfig& cfg) {
  cfg.validate();
  return {-pi * pi / (720.0 * cfg.n * cfg.a * cfg.a * cfg.a), 0.0, Method::closed_form, true};
}

/// Zero-temperature internal energy; equal to the free energy.
inline EnergyValue internal_energy_T0(const CavityConfig& cfg) { return free_energy_T0(cfg); }

/// U = -pi n^2 T^3 sum_{m>=1} coth(2 pi n m a T) / (m sinh^2(2 pi n m a T)).
/// Converges geometrically with ratio exp(-4 pi n a T); at very small n a T
/// the term budget runs out and the result is flagged.
inline EnergyValue internal_energy_direct(const CavityConfig& cfg,
                                          const Tolerance& tol = engine::kSeriesTolerance) {
  detail::require_positive_temperature(cfg, "internal_energy_direct");
  const double x = 2.0 * pi * cfg.reduced_temperature();
  auto term = [x](std::int64_t m) {
    const double md = static_cast<double>(m);
    return detail::coth_over_sinh2(x * md) / md;
  };
  const auto sum = engine::sum_series(term, 1, tol);
  const double prefactor = -pi * cfg.n * cfg.n * cfg.T * cfg.T * cfg.T;
  return {prefactor * sum.value, std::abs(prefactor) * sum.err_estimate, Method::direct_sum, sum.converged};
}

/// Poisson-resummed internal energy, valid at any temperature:
///   U = 2 pi n^2 T^3 [ -pi / (1440 t^3)
///         + (t/pi^3) sum_{m>=1} m^-4 { -3 + y coth y + y^2/sinh^2 y (1 + y coth y) } ],
/// t = n a T, y = pi m / (2t).
///
/// The non-decaying part of the summand, -3 + y, is summed in closed form
/// (-3 zeta(4) + pi zeta(3) / (2t)); the remainder decays like exp(-2y).
/// At high temperature the bracket cancels down to ~exp(-4 pi t), so it is
/// evaluated in 50-digit binary floating point. The result is flagged once
/// the residual cancellation exceeds even that precision (t around 8 and up).
inline EnergyValue internal_energy_resummed(const CavityConfig& cfg,
                                            const Tolerance& tol = engine::kSeriesTolerance) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  namespace bc = boost::math::constants;
  detail::require_positive_temperature(cfg, "internal_energy_resummed");

  const Real t = cfg.reduced_temperature();
  const Real rpi = bc::pi<Real>();
  const Real zeta3 = bc::zeta_three<Real>();
  const Real zeta4 = pow(rpi, 4) / 90;
  const Real eps = std::numeric_limits<Real>::epsilon();

  const Real leading = -rpi / (1440 * t * t * t);
  const Real algebraic = -3 * zeta4 + rpi * zeta3 / (2 * t);

  Real remainder = 0;
  Real last_term = 0;
  int small_run = 0;
  bool summed = false;
  const Real scale = abs(leading) + t / pow(rpi, 3) * (3 * zeta4 + rpi * zeta3 / (2 * t));
  for (std::int64_t m = 1; m <= tol.max_iter; ++m) {
    const Real md = static_cast<double>(m);
    const Real y = rpi * md / (2 * t);
    last_term = detail::resummed_remainder(y) / (md * md * md * md);
    remainder += last_term;
    if (t / pow(rpi, 3) * last_term < eps * scale) {
      if (++small_run >= 3) {
        summed = true;
        break;
      }
    } else {
      small_run = 0;
    }
  }

  const Real bracket = leading + t / pow(rpi, 3) * (algebraic + remainder);
  const Real bracket_err = 16 * eps * (scale + t / pow(rpi, 3) * abs(remainder));

  const double prefactor = 2.0 * pi * cfg.n * cfg.n * cfg.T * cfg.T * cfg.T;
  EnergyValue out;
  out.value = prefactor * static_cast<double>(bracket);
  out.err_estimate = std::abs(prefactor) * static_cast<double>(bracket_err);
  out.method = Method::poisson_resummed;
  out.converged = summed && out.err_estimate <= tol.rel * std::abs(out.value);
  return out;
}

/// U = d(beta F)/d(beta) by a Richardson-extrapolated central difference
/// with step beta * 1e-4. The m = 0 term of beta F does not depend on beta,
/// so only the m >= 1 terms are differenced, over a fixed Matsubara range.
inline EnergyValue internal_energy_from_F(const CavityConfig& cfg,
                                          const Tolerance& tol = engine::kSeriesTolerance) {
  detail::require_positive_temperature(cfg, "internal_energy_from_F");
  const Tolerance inner = detail::inner_tolerance(tol);
  const std::int64_t m_max = detail::thermal_cutoff(cfg);
  const double beta = 1.0 / cfg.T;

  double quad_err = 0.0;
  bool quad_ok = true;
  auto beta_f_thermal = [&](double b) {
    CavityConfig shifted = cfg;
    shifted.T = 1.0 / b;
    const auto part = detail::thermal_part(shifted, m_max, inner);
    quad_err = std::max(quad_err, part.err);
    quad_ok = quad_ok && part.converged;
    return part.value / (pi * cfg.a * cfg.a);
  };
  const double h = 1e-4 * beta;
  const auto d = engine::richardson_diff(beta_f_thermal, beta, h);

  EnergyValue out;
  out.value = d.value;
  out.err_estimate = d.err_estimate + quad_err / (pi * cfg.a * cfg.a * h);
  out.method = Method::finite_difference;
  out.converged = quad_ok && out.err_estimate <= std::max(1e-6 * std::abs(out.value), tol.abs);
  return out;
}

/// U = -pi^2/(720 n a^3) [1 - 720 (t/pi)^3 zeta(3) + 48 t^4], t = n a T.
/// Error estimate |U| t^5; flagged outside t < 0.5.
inline EnergyValue internal_energy_lowT(const CavityConfig& cfg) {
  cfg.validate();
  const double t = cfg.reduced_temperature();
  const double tp = t / pi;
  const double bracket = 1.0 - 720.0 * tp * tp * tp * specfun::riemann_zeta(3.0) + 48.0 * t * t * t * t;
  const double value = -pi * pi / (720.0 * cfg.n * cfg.a * cfg.a * cfg.a) * bracket;
  return {value, std::abs(value) * std::pow(t, 5), Method::low_T_expansion, t < 0.5};
}

/// F = -pi^2/(720 n a^3) [1 + 360 (t/pi)^3 zeta(3) - (2t)^4], t = n a T.
inline EnergyValue free_energy_lowT(const CavityConfig& cfg) {
  cfg.validate();
  const double t = cfg.reduced_temperature();
  const double tp = t / pi;
  const double bracket = 1.0 + 360.0 * tp * tp * tp * specfun::riemann_zeta(3.0) - std::pow(2.0 * t, 4);
  const double value = -pi * pi / (720.0 * cfg.n * cfg.a * cfg.a * cfg.a) * bracket;
  return {value, std::abs(value) * std::pow(t, 5), Method::low_T_expansion, t < 0.5};
}

/// Leading high-temperature term U = -4 pi n^2 T^3 exp(-4 pi n a T).
inline EnergyValue internal_energy_highT(const CavityConfig& cfg) {
  cfg.validate();
  const double alpha = 4.0 * pi * cfg.reduced_temperature();
  const double value = -4.0 * pi * cfg.n * cfg.n * cfg.T * cfg.T * cfg.T * std::exp(-alpha);
  // next term relative size 2 exp(-alpha)
  return {value, std::abs(value) * 2.0 * std::exp(-alpha), Method::high_T_asymptote, cfg.reduced_temperature() >= 1.0};
}

/// Internal energy through whichever series converges geometrically:
/// direct for n a T >= 0.3, resummed below, closed form at T = 0.
inline EnergyValue internal_energy(const CavityConfig& cfg, const Tolerance& tol = engine::kSeriesTolerance) {
  cfg.validate();
  if (cfg.T == 0.0) {
    return internal_energy_T0(cfg);
  }
  return cfg.reduced_temperature() >= 0.3 ? internal_energy_direct(cfg, tol) : internal_energy_resummed(cfg, tol);
}

/// P = -dF/da by Richardson-extrapolated central difference (step a * 1e-3).
/// T = 0 differentiates the closed form; T > 0 the Matsubara sum over a
/// fixed mode range.
inline EnergyValue pressure(const CavityConfig& cfg, const Tolerance& tol = engine::kSeriesTolerance) {
  cfg.validate();
  const double h = 1e-3 * cfg.a;
  EnergyValue out;
  out.method = Method::finite_difference;
  if (cfg.T == 0.0) {
    auto f = [&](double a) {
      CavityConfig c = cfg;
      c.a = a;
      return free_energy_T0(c).value;
    };
    const auto d = engine::richardson_diff(f, cfg.a, h);
    out.value = -d.value;
    out.err_estimate = d.err_estimate;
    return out;
  }

  const Tolerance inner = detail::inner_tolerance(tol);
  CavityConfig narrow = cfg;
  narrow.a = cfg.a - h;
  const std::int64_t m_max = detail::thermal_cutoff(narrow);
  double quad_err = 0.0;
  bool quad_ok = true;
  auto f = [&](double a) {
    CavityConfig c = cfg;
    c.a = a;
    const auto zero_mode = detail::log_mode_integral(0.0, a, inner);
    const auto part = detail::thermal_part(c, m_max, inner);
    quad_ok = quad_ok && zero_mode.converged && part.converged;
    const double scale = cfg.T / (pi * a * a);
    quad_err = std::max(quad_err, scale * (zero_mode.err_estimate + part.err));
    return scale * (0.5 * zero_mode.value + part.value);
  };
  const auto d = engine::richardson_diff(f, cfg.a, h);
  out.value = -d.value;
  out.err_estimate = d.err_estimate + quad_err / h;
  out.converged = quad_ok;
  return out;
}

}  // namespace casimir::matsubara
