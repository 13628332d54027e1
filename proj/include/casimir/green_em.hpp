#pragma once

// Electromagnetic energy per unit area from the cavity Green's function.
//
// Everything here is on the imaginary frequency axis, omega = i zeta, where
// kappa^2 = k_perp^2 + n^2 zeta^2 and all spectral quantities are real. Only
// the separation-dependent part of the Green's function (the 1/d factor,
// d = exp(2 kappa a) - 1) is kept; the bulk term is dropped.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/expm1.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "casimir/engine.hpp"
#include "casimir/types.hpp"

namespace casimir::green_em {

using engine::Tolerance;
using std::numbers::pi;

struct StaticMedium {
  double eps = 1.0;
  double mu = 1.0;

  [[nodiscard]] double n() const { return std::sqrt(eps * mu); }
  void validate() const {
    if (!(eps > 0.0) || !(mu > 0.0)) throw std::invalid_argument("eps and mu must be positive");
  }
};

/// Diagonal transverse-Fourier Green's components in the frame where
/// k_perp points along x, after the rotation omega^2 -> -zeta^2.
struct SpectralGreens {
  double g_xx = 0.0;
  double g_yy = 0.0;
  double g_zz = 0.0;
  double kappa = 0.0;
  double d_factor = 0.0;  // exp(2 kappa a) - 1
};

/// Electric and magnetic halves of the rotated spectral energy density at
/// z' -> z, each normalised so that
///   W = -(a / 2 pi^2) int_0^inf dzeta int_0^inf k dk (electric_half + magnetic_half).
struct EnergySpectralPoint {
  double electric_half = 0.0;
  double magnetic_half = 0.0;
};

inline SpectralGreens greens_components(double z, double zp, double k_perp, double zeta, double a,
                                        const StaticMedium& medium) {
  medium.validate();
  if (!(a > 0.0) || z < 0.0 || zp < 0.0 || z > a || zp > a) {
    throw std::domain_error("greens_components requires 0 <= z, z' <= a");
  }
  const double n2 = medium.eps * medium.mu;
  const double kappa = std::sqrt(k_perp * k_perp + n2 * zeta * zeta);
  if (!(kappa > 0.0)) {
    throw std::domain_error("greens_components: kappa = 0 is singular");
  }
  SpectralGreens g;
  g.kappa = kappa;
  g.d_factor = std::expm1(2.0 * kappa * a);
  const double c = std::cosh(kappa * (z - zp)) / g.d_factor;
  g.g_xx = -kappa / medium.eps * c;
  g.g_yy = -medium.mu * zeta * zeta / kappa * c;
  g.g_zz = k_perp * k_perp / (kappa * medium.eps) * c;
  return g;
}

namespace detail {

// The curl-curl trace cancels down to n^2 zeta^2 from terms of size kappa^4 / zeta^2,
// so the operator algebra runs in 50 digits.
using Wide = boost::multiprecision::cpp_bin_float_50;

struct WideComplex {
  Wide re{0};
  Wide im{0};

  friend WideComplex operator+(const WideComplex& l, const WideComplex& r) { return {l.re + r.re, l.im + r.im}; }
  friend WideComplex operator*(const WideComplex& l, const WideComplex& r) {
    return {l.re * r.re - l.im * r.im, l.re * r.im + l.im * r.re};
  }
  [[nodiscard]] bool is_zero() const { return re == 0 && im == 0; }
};

// A linear combination of z-derivatives of the kernel cosh(kappa (z - z')),
// indexed by the number of unprimed and primed z-derivatives.
class KernelOperator {
 public:
  static constexpr int kMaxOrder = 4;

  static KernelOperator constant(WideComplex c) {
    KernelOperator op;
    op.coeff_[0][0] = c;
    return op;
  }
  static KernelOperator dz() {
    KernelOperator op;
    op.coeff_[1][0] = {Wide(1), Wide(0)};
    return op;
  }
  static KernelOperator dz_prime() {
    KernelOperator op;
    op.coeff_[0][1] = {Wide(1), Wide(0)};
    return op;
  }

  KernelOperator& operator+=(const KernelOperator& rhs) {
    for (int p = 0; p < kMaxOrder; ++p)
      for (int q = 0; q < kMaxOrder; ++q) coeff_[p][q] = coeff_[p][q] + rhs.coeff_[p][q];
    return *this;
  }

  friend KernelOperator operator*(const KernelOperator& l, const KernelOperator& r) {
    KernelOperator out;
    for (int p1 = 0; p1 < kMaxOrder; ++p1)
      for (int q1 = 0; q1 < kMaxOrder; ++q1) {
        if (l.coeff_[p1][q1].is_zero()) continue;
        for (int p2 = 0; p1 + p2 < kMaxOrder; ++p2)
          for (int q2 = 0; q1 + q2 < kMaxOrder; ++q2)
            out.coeff_[p1 + p2][q1 + q2] = out.coeff_[p1 + p2][q1 + q2] + l.coeff_[p1][q1] * r.coeff_[p2][q2];
      }
    return out;
  }

  friend KernelOperator operator*(const WideComplex& s, const KernelOperator& op) {
    KernelOperator out = op;
    for (auto& row : out.coeff_)
      for (auto& c : row) c = s * c;
    return out;
  }

  /// Applies the operator to cosh(kappa (z - z')) and sets z' = z:
  /// d^p/dz^p d^q/dz'^q cosh(kappa (z - z')) -> (-1)^q kappa^(p+q) for even p+q, else 0.
  [[nodiscard]] WideComplex at_coincidence(const Wide& kappa) const {
    WideComplex sum;
    for (int p = 0; p < kMaxOrder; ++p)
      for (int q = 0; q < kMaxOrder; ++q) {
        if ((p + q) % 2 != 0) continue;
        Wide factor = (q % 2 == 0) ? Wide(1) : Wide(-1);
        for (int i = 0; i < p + q; ++i) factor *= kappa;
        sum = sum + coeff_[p][q] * WideComplex{factor, Wide(0)};
      }
    return sum;
  }

 private:
  std::array<std::array<WideComplex, kMaxOrder>, kMaxOrder> coeff_{};
};

constexpr int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((i == 0 && j == 1) || (i == 1 && j == 2) || (i == 2 && j == 0)) ? 1 : -1;
}

}  // namespace detail

/// Magnetic half built from the curl-curl construction
///   g^H_ik = (1/omega^2) curl_il curl'_km g^E_lm,
/// where the full electric tensor is g^E = (1/eps)(grad grad + n^2 omega^2) g
/// with scalar kernel g = cosh(kappa (z - z')) / (kappa d). In transverse
/// Fourier space d/dx -> i k_x, d/dy -> i k_y, d/dx' -> -i k_x, d/dy' -> -i k_y;
/// z-derivatives stay symbolic until z' = z. `phi` orients k_perp in the plane.
inline double magnetic_half_curl_curl(double k_perp, double zeta, double a, const StaticMedium& medium,
                                      double phi = 0.0) {
  using detail::Wide;
  using detail::WideComplex;
  using Op = detail::KernelOperator;
  medium.validate();
  const Wide n2 = Wide(medium.eps) * Wide(medium.mu);
  const Wide kz = Wide(zeta);
  const Wide kp = Wide(k_perp);
  const Wide kappa = sqrt(kp * kp + n2 * kz * kz);
  if (!(kappa > 0)) {
    throw std::domain_error("magnetic_half_curl_curl: kappa = 0 is singular");
  }
  const Wide omega2 = -kz * kz;
  const Wide kx = kp * cos(Wide(phi));
  const Wide ky = kp * sin(Wide(phi));

  const std::array<Op, 3> grad = {Op::constant({Wide(0), kx}), Op::constant({Wide(0), ky}), Op::dz()};
  const std::array<Op, 3> grad_prime = {Op::constant({Wide(0), -kx}), Op::constant({Wide(0), -ky}), Op::dz_prime()};

  const WideComplex inv_eps{Wide(1) / Wide(medium.eps), Wide(0)};
  std::array<std::array<Op, 3>, 3> electric;
  for (int l = 0; l < 3; ++l)
    for (int m = 0; m < 3; ++m) {
      Op entry = grad[l] * grad[m];
      if (l == m) entry += Op::constant({n2 * omega2, Wide(0)});
      electric[l][m] = inv_eps * entry;
    }

  Op trace;
  for (int ii = 0; ii < 3; ++ii)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) {
        const int e1 = detail::levi_civita(ii, j, l);
        if (e1 == 0) continue;
        for (int m = 0; m < 3; ++m)
          for (int q = 0; q < 3; ++q) {
            const int e2 = detail::levi_civita(ii, m, q);
            if (e2 == 0) continue;
            trace += WideComplex{Wide(e1 * e2), Wide(0)} * (grad[j] * grad_prime[m] * electric[l][q]);
          }
      }
  const Wide d_factor = boost::math::expm1(Wide(2) * kappa * Wide(a));
  const Wide trace_h = trace.at_coincidence(kappa).re / (omega2 * kappa * d_factor);
  // (1/2mu) tr g^H, sign-flipped to the positive rotated convention
  return static_cast<double>(-trace_h / (Wide(2) * Wide(medium.mu)));
}

inline EnergySpectralPoint spectral_energy_density(double k_perp, double zeta, double a, const StaticMedium& medium) {
  const auto g = greens_components(0.0, 0.0, k_perp, zeta, a, medium);
  EnergySpectralPoint out;
  out.electric_half = -0.5 * medium.eps * (g.g_xx + g.g_yy + g.g_zz);
  out.magnetic_half = magnetic_half_curl_curl(k_perp, zeta, a, medium);
  return out;
}

namespace detail {

inline Tolerance nested_inner(const Tolerance& tol) { return {std::min(1e-13, 1e-2 * tol.rel), 0.0, 4000}; }

/// W = -(a/pi^2) int_0^inf dzeta n^2(zeta) zeta^2 int_0^inf k dk / (kappa d),
/// kappa^2 = k^2 + n^2(zeta) zeta^2, by nested adaptive quadrature. The
/// index may depend on the imaginary frequency.
template <class IndexSquared>
EnergyValue zero_temperature_energy(double a, const IndexSquared& n2_of_zeta, const Tolerance& tol) {
  const Tolerance inner = nested_inner(tol);
  double inner_rel_err = 0.0;
  bool inner_ok = true;
  // variables scaled by 1/(2a): zeta = u/(2a), k = v/(2a)
  auto outer = [&](double u) {
    const double zeta = u / (2.0 * a);
    const double n2 = n2_of_zeta(zeta);
    const double mass = 2.0 * a * std::sqrt(n2) * zeta;  // 2 a n zeta
    auto integrand = [mass](double v) {
      const double s = std::hypot(v, mass);
      return v / (s * std::expm1(s));
    };
    const auto r = engine::adaptive_quad(integrand, 0.0, std::numeric_limits<double>::infinity(), inner);
    inner_ok = inner_ok && r.converged;
    if (r.value != 0.0) inner_rel_err = std::max(inner_rel_err, r.err_estimate / std::abs(r.value));
    return n2 * u * u * r.value;
  };
  Tolerance outer_tol = tol;
  outer_tol.abs = 0.0;
  const auto r = engine::adaptive_quad(outer, 0.0, std::numeric_limits<double>::infinity(), outer_tol);
  // int dzeta zeta^2 int k dk /(kappa d) = (1/(2a))^3 * (1/(2a))^2 * (2a) * [u, v integral]
  const double scale = -(a / (pi * pi)) / std::pow(2.0 * a, 4);
  EnergyValue out;
  out.value = scale * r.value;
  out.err_estimate = std::abs(scale) * (r.err_estimate + inner_rel_err * std::abs(r.value));
  out.method = Method::quadrature;
  out.converged = r.converged && inner_ok;
  return out;
}

}  // namespace detail

/// Zero-temperature electromagnetic energy per unit area by double quadrature
/// of the rotated spectral density.
inline EnergyValue em_energy_T0(const CavityConfig& cfg, const Tolerance& tol = engine::kQuadTolerance) {
  cfg.validate();
  if (cfg.T != 0.0) {
    throw std::domain_error("em_energy_T0 requires T = 0");
  }
  const double n2 = cfg.n * cfg.n;
  return detail::zero_temperature_energy(cfg.a, [n2](double) { return n2; }, tol);
}

/// Same energy after the polar change of variables k = kappa cos(theta),
/// n zeta = kappa sin(theta): W = -(1/(48 pi^2 n a^3)) int_0^inf z^3/(e^z - 1) dz.
inline EnergyValue em_energy_T0_polar(const CavityConfig& cfg, const Tolerance& tol = engine::kQuadTolerance) {
  cfg.validate();
  auto bose = [](double z) { return z * z * z / std::expm1(z); };
  const auto r = engine::adaptive_quad(bose, 0.0, std::numeric_limits<double>::infinity(), tol);
  const double scale = -1.0 / (48.0 * pi * pi * cfg.n * cfg.a * cfg.a * cfg.a);
  return {scale * r.value, std::abs(scale) * r.err_estimate, Method::quadrature, r.converged};
}

/// How the inner frequency integral of the finite-temperature energy is done.
enum class InnerIntegral {
  closed_log,  // int_x^inf dz/(e^z - 1) = -ln(1 - e^{-x})
  quadrature,
};

/// W = -4 pi n^2 T^3 sum_{m>=1} m^2 int_{alpha m}^inf dz/(e^z - 1), alpha = 4 pi n a T.
inline EnergyValue em_energy_finiteT(const CavityConfig& cfg, const Tolerance& tol = engine::kSeriesTolerance,
                                     InnerIntegral inner = InnerIntegral::closed_log) {
  cfg.validate();
  if (!(cfg.T > 0.0)) {
    throw std::domain_error("em_energy_finiteT requires T > 0");
  }
  const double alpha = 4.0 * pi * cfg.reduced_temperature();
  const Tolerance quad_tol = detail::nested_inner(tol);
  bool quad_ok = true;
  double quad_err = 0.0;
  auto term = [&](std::int64_t m) {
    const double md = static_cast<double>(m);
    const double x = alpha * md;
    if (inner == InnerIntegral::closed_log) {
      return -md * md * std::log1p(-std::exp(-x));
    }
    auto bose = [](double z) { return 1.0 / std::expm1(z); };
    const auto r = engine::adaptive_quad(bose, x, std::numeric_limits<double>::infinity(), quad_tol);
    quad_ok = quad_ok && r.converged;
    quad_err += md * md * r.err_estimate;
    return md * md * r.value;
  };
  const auto sum = engine::sum_series(term, 1, tol);
  const double prefactor = -4.0 * pi * cfg.n * cfg.n * cfg.T * cfg.T * cfg.T;
  return {prefactor * sum.value, std::abs(prefactor) * (sum.err_estimate + quad_err),
          inner == InnerIntegral::closed_log ? Method::direct_sum : Method::quadrature, sum.converged && quad_ok};
}

}  // namespace casimir::green_em
