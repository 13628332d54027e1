#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace casimir::specfun {

/// Spacetime dimension D >= 3; d = D - 1 spatial dimensions.
class DimensionD {
 public:
  explicit DimensionD(int spacetime) : spacetime_(spacetime) {
    if (spacetime < 3) {
      throw std::invalid_argument("spacetime dimension must be >= 3, got " + std::to_string(spacetime));
    }
  }
  [[nodiscard]] int spacetime() const { return spacetime_; }
  [[nodiscard]] int spatial() const { return spacetime_ - 1; }

 private:
  int spacetime_;
};

/// Gamma function for x > 0.
inline double gamma_fn(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("gamma_fn requires x > 0");
  }
  return std::tgamma(x);
}

/// Hurwitz zeta sum_{k>=0} (k+q)^-s for s > 1, q > 0.
///
/// Direct partial sum over k < N followed by the Euler-Maclaurin tail
///   (N+q)^(1-s)/(s-1) + (N+q)^-s/2 + B2/2! s (N+q)^(-s-1) + B4/4! s(s+1)(s+2) (N+q)^(-s-3).
/// N is the smallest cutoff (with N + q >= s) for which the first omitted
/// correction, B6/6! s...(s+4) (N+q)^(-s-5), is below 1e-15 of q^-s, a lower
/// bound for the sum.
inline double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0) || !std::isfinite(s) || !std::isfinite(q)) {
    throw std::domain_error("hurwitz_zeta requires s > 1 and q > 0");
  }
  constexpr double b2_over_2 = 1.0 / 12.0;
  constexpr double b4_over_24 = -1.0 / 720.0;
  constexpr double b6_over_720 = 1.0 / 30240.0;
  const double c6 = b6_over_720 * s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0);
  // c6 (N+q)^(-s-5) <= 1e-15 q^-s  <=>  (N+q) >= (c6 1e15 q^s)^(1/(s+5))
  const double log_x = (std::log(c6) + 15.0 * std::numbers::ln10 + s * std::log(q)) / (s + 5.0);
  double x_min = std::max(std::exp(log_x), s);
  x_min = std::max(x_min, q + 1.0);
  const double n_cut = std::ceil(x_min - q);
  if (n_cut > 1e7) {
    throw std::domain_error("hurwitz_zeta: parameters need more than 1e7 direct terms");
  }
  const long n_terms = static_cast<long>(n_cut);

  // Sum smallest terms first.
  double partial = 0.0;
  for (long k = n_terms - 1; k >= 0; --k) {
    partial += std::pow(static_cast<double>(k) + q, -s);
  }
  const double x = static_cast<double>(n_terms) + q;
  const double x_pow = std::pow(x, -s);
  const double tail = x * x_pow / (s - 1.0) + 0.5 * x_pow + b2_over_2 * s * x_pow / x +
                      b4_over_24 * s * (s + 1.0) * (s + 2.0) * x_pow / (x * x * x);
  return partial + tail;
}

/// Riemann zeta for s > 1, as hurwitz_zeta(s, 1).
inline double riemann_zeta(double s) {
  if (!(s > 1.0)) {
    throw std::domain_error("riemann_zeta requires s > 1");
  }
  return hurwitz_zeta(s, 1.0);
}

/// Omega_{d-1} = 2 pi^(d/2) / Gamma(d/2): surface area of the unit sphere in d dimensions.
inline double solid_angle(int d) {
  if (d < 1) {
    throw std::domain_error("solid_angle requires d >= 1");
  }
  const double half = 0.5 * d;
  return 2.0 * std::pow(std::numbers::pi, half) / gamma_fn(half);
}

}  // namespace casimir::specfun
