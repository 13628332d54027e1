#pragma once

// Cavity in D spacetime dimensions (d = D - 1 spatial), T = 0.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "casimir/dispersion.hpp"
#include "casimir/engine.hpp"
#include "casimir/specfun.hpp"
#include "casimir/types.hpp"

namespace casimir::hyperdim {

using engine::Tolerance;
using specfun::DimensionD;
using std::numbers::pi;

struct HyperConfig {
  DimensionD dim{4};
  double a = 1.0;
  double n = 1.0;

  void validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("separation a must be > 0");
    if (!(n >= 1.0) || !std::isfinite(n)) throw std::invalid_argument("refractive index n must be >= 1");
  }
  [[nodiscard]] int D() const { return dim.spacetime(); }
  [[nodiscard]] int d() const { return dim.spatial(); }
};

namespace detail {

// (D - 2) Gamma(D/2) / ((4 pi)^(D/2) a^D n)
inline double density_scale(const HyperConfig& cfg) {
  const double D = cfg.D();
  return (D - 2.0) * specfun::gamma_fn(0.5 * D) / (std::pow(4.0 * pi, 0.5 * D) * std::pow(cfg.a, D) * cfg.n);
}

}  // namespace detail

/// P = -((D-2)(D-1)/n) Gamma(D/2) zeta(D) / ((4 pi)^(D/2) a^D).
inline EnergyValue pressure_closed(const HyperConfig& cfg) {
  cfg.validate();
  const double D = cfg.D();
  const double v = -(D - 1.0) * detail::density_scale(cfg) * specfun::riemann_zeta(D);
  return {v, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(v), Method::closed_form, true};
}

/// P = -(2(D-2)/(2 pi)^d) Omega_{d-2} int dzeta int kappa k^(d-2) dk / (e^{2 kappa a} - 1),
/// kappa^2 = k^2 + n^2 zeta^2, by nested quadrature.
inline EnergyValue pressure_quadrature(const HyperConfig& cfg, const Tolerance& tol = engine::kQuadTolerance) {
  cfg.validate();
  const int d = cfg.d();
  const double D = cfg.D();
  const Tolerance inner{std::min(1e-13, 1e-2 * tol.rel), 0.0, 4000};
  bool inner_ok = true;
  double inner_rel_err = 0.0;
  // zeta = u / (2 a n), k = v / (2 a), kappa = hypot(u, v) / (2 a)
  auto outer = [&](double u) {
    auto integrand = [u, d](double v) {
      const double s = std::hypot(u, v);
      if (s == 0.0) return 0.0;
      return s * std::pow(v, d - 2) / std::expm1(s);
    };
    const auto r = engine::adaptive_quad(integrand, 0.0, std::numeric_limits<double>::infinity(), inner);
    inner_ok = inner_ok && r.converged;
    if (r.value != 0.0) inner_rel_err = std::max(inner_rel_err, r.err_estimate / std::abs(r.value));
    return r.value;
  };
  Tolerance outer_tol = tol;
  outer_tol.abs = 0.0;
  const auto r = engine::adaptive_quad(outer, 0.0, std::numeric_limits<double>::infinity(), outer_tol);
  const double measure = 2.0 * (D - 2.0) / std::pow(2.0 * pi, d) * specfun::solid_angle(d - 1);
  const double scale = -measure / (std::pow(2.0 * cfg.a, D) * cfg.n);
  return {scale * r.value, std::abs(scale) * (r.err_estimate + inner_rel_err * std::abs(r.value)), Method::quadrature,
          r.converged && inner_ok};
}

/// f_D(u) = zeta_H(D, u) + zeta_H(D, 1 - u).
inline double anomaly_profile(int D, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("anomaly profile requires 0 < u < 1");
  }
  return specfun::hurwitz_zeta(D, u) + specfun::hurwitz_zeta(D, 1.0 - u);
}

struct DensityProfile {
  std::vector<double> u;
  double w1 = 0.0;
  std::vector<double> w2;
  std::vector<double> total;        // w1 + w2
  std::vector<double> regularized;  // plate self-energies removed: w1
};

/// w = -((D-2) Gamma(D/2)/((4 pi)^(D/2) a^D n)) [zeta(D) + (D/2 - 2) f_D(z/a)] = w1 + w2.
inline DensityProfile density_profile(const HyperConfig& cfg, std::span<const double> u_grid) {
  cfg.validate();
  if (cfg.D() < 4) {
    throw std::domain_error("density profile requires D >= 4");
  }
  const double c = -detail::density_scale(cfg);
  const double D = cfg.D();
  DensityProfile out;
  out.w1 = c * specfun::riemann_zeta(D);
  for (double u : u_grid) {
    const double f = anomaly_profile(cfg.D(), u);  // validates u even when the coefficient is 0
    const double w2 = c * (0.5 * D - 2.0) * f;
    out.u.push_back(u);
    out.w2.push_back(w2);
    out.total.push_back(out.w1 + w2);
    out.regularized.push_back(out.w1);
  }
  return out;
}

struct PressureFromW1 {
  EnergyValue trace;  // (D - 1) w1
  EnergyValue work;   // -d(a w1)/da by finite difference
};

inline PressureFromW1 pressure_from_w1(const HyperConfig& cfg) {
  cfg.validate();
  auto w1_of = [&cfg](double a) {
    HyperConfig c = cfg;
    c.a = a;
    return -detail::density_scale(c) * specfun::riemann_zeta(c.D());
  };
  PressureFromW1 out;
  const double w1 = w1_of(cfg.a);
  out.trace = {(cfg.D() - 1.0) * w1, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(w1) * cfg.D(),
               Method::closed_form, true};
  const auto der = engine::richardson_diff([&](double a) { return a * w1_of(a); }, cfg.a, 1e-3 * cfg.a);
  out.work = {-der.value, der.err_estimate, Method::finite_difference, true};
  return out;
}

struct CutoffResult {
  EnergyValue energy;
  std::array<double, 3> lambda{};  // lambda, lambda/2, lambda/4
  std::array<double, 3> scan{};
};

namespace detail {

// Omega_{d-2} / (2 pi)^(d-1): angular measure of d^{d-1} k_perp / (2 pi)^{d-1}.
inline double transverse_measure(int d) {
  const double om = d >= 2 ? specfun::solid_angle(d - 1) : 2.0;
  return om / std::pow(2.0 * pi, d - 1);
}

// sum_{m>=1} measure int_0^inf k^{d-2} E(k, m) e^{-lambda K} dk, K = sqrt(k^2 + (pi m/a)^2),
// with the k-integral split at the optional `split_K`.
template <class Energy>
EnergyValue weighted_mode_sum(const HyperConfig& cfg, double lambda, const Energy& energy, double split_K,
                              const Tolerance& tol) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("cutoff lambda must be finite and > 0");
  }
  const int d = cfg.d();
  const Tolerance inner{std::min(1e-13, 1e-2 * tol.rel), 0.0, 4000};
  bool ok = true;
  double quad_err = 0.0;
  auto term = [&](std::int64_t m) {
    const double q = pi * static_cast<double>(m) / cfg.a;
    // k = s / lambda
    auto integrand = [&](double s) {
      const double k = s / lambda;
      const double K = std::hypot(k, q);
      const double w = std::exp(-lambda * K);
      if (w == 0.0) return 0.0;
      return std::pow(s, d - 2) * energy(K) * w;
    };
    double value = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    if (split_K > q) {
      const double s_split = lambda * std::sqrt(split_K * split_K - q * q);
      const auto r1 = engine::adaptive_quad(integrand, 0.0, s_split, inner);
      const auto r2 = engine::adaptive_quad(integrand, s_split, inf, inner);
      value = r1.value + r2.value;
      quad_err += r1.err_estimate + r2.err_estimate;
      ok = ok && r1.converged && r2.converged;
    } else {
      const auto r = engine::adaptive_quad(integrand, 0.0, inf, inner);
      value = r.value;
      quad_err += r.err_estimate;
      ok = ok && r.converged;
    }
    return value;
  };
  Tolerance series_tol = tol;
  series_tol.max_iter = std::max<std::int64_t>(tol.max_iter, 1'000'000);
  const auto sum = engine::sum_series(term, 1, series_tol);
  const double scale = transverse_measure(d) / std::pow(lambda, d - 1);
  return {scale * sum.value, scale * (sum.err_estimate + quad_err), Method::quadrature, sum.converged && ok};
}

}  // namespace detail

/// W = (1/n) sum_{m>=1} int d^{d-1}k/(2 pi)^{d-1} K e^{-lambda K}, K = sqrt(k^2 + pi^2 m^2/a^2).
/// The raw value diverges as lambda -> 0; the scan repeats it at lambda/2 and lambda/4.
inline CutoffResult cutoff_mode_energy(const HyperConfig& cfg, double lambda,
                                       const Tolerance& tol = engine::kQuadTolerance) {
  cfg.validate();
  CutoffResult out;
  bool ok = true;
  for (int i = 0; i < 3; ++i) {
    const double l = lambda / static_cast<double>(1 << i);
    auto v = detail::weighted_mode_sum(cfg, l, [](double K) { return K; }, 0.0, tol);
    v.value /= cfg.n;
    v.err_estimate /= cfg.n;
    out.lambda[i] = l;
    out.scan[i] = v.value;
    ok = ok && v.converged;
    if (i == 0) out.energy = v;
  }
  out.energy.converged = ok;
  return out;
}

/// W = sum_m int d^{d-1}k/(2 pi)^{d-1} K / n(K) e^{-lambda K}, with n(K) = K / omega(K) from
/// the mode relation n(omega) omega = K. `branch` picks the solution; the photon-like
/// branch tends to the vacuum dispersion at large K.
inline CutoffResult dispersive_hyper_energy(const HyperConfig& cfg, const dispersion::LorentzModel& model,
                                            double lambda, const Tolerance& tol = engine::kQuadTolerance,
                                            dispersion::Branch branch = dispersion::Branch::photon) {
  cfg.validate();
  model.validate();
  auto omega_of = [&](double K) { return dispersion::dispersive_mode_solve(model, K, {1e-14, 0.0, 200}, branch); };
  const double split = branch == dispersion::Branch::photon ? model.omega0 : 0.0;
  CutoffResult out;
  bool ok = true;
  for (int i = 0; i < 3; ++i) {
    const double l = lambda / static_cast<double>(1 << i);
    const auto v = detail::weighted_mode_sum(cfg, l, omega_of, split, tol);
    out.lambda[i] = l;
    out.scan[i] = v.value;
    ok = ok && v.converged;
    if (i == 0) out.energy = v;
  }
  out.energy.converged = ok;
  return out;
}

}  // namespace casimir::hyperdim
