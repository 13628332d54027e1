#pragma once

// Numerical kernel shared by the physics modules: adaptive Gauss-Kronrod
// quadrature on finite and semi-infinite intervals, monotone-series
// summation with a tail bound, bracketed root finding and central
// differences.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

namespace casimir::engine {

struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-14;
  std::int64_t max_iter = 2000;

  void validate() const {
    if (!(rel > 0.0) || !(abs >= 0.0) || max_iter < 1) {
      throw std::invalid_argument("Tolerance requires rel > 0, abs >= 0, max_iter >= 1");
    }
  }

  [[nodiscard]] double target(double value) const { return std::max(rel * std::abs(value), abs); }
};

/// Defaults for quadrature: 2000 subdivisions.
inline constexpr Tolerance kQuadTolerance{1e-10, 1e-14, 2000};
/// Defaults for series: up to 10^6 terms.
inline constexpr Tolerance kSeriesTolerance{1e-10, 1e-14, 1'000'000};

struct NumericResult {
  double value = 0.0;
  double err_estimate = 0.0;
  std::int64_t evaluations = 0;
  bool converged = false;
};

template <class F>
concept RealFunction = std::invocable<F, double> && std::convertible_to<std::invoke_result_t<F, double>, double>;

template <class F>
concept SeriesTerm =
    std::invocable<F, std::int64_t> && std::convertible_to<std::invoke_result_t<F, std::int64_t>, double>;

namespace detail {

// 15-point Kronrod abscissae (positive half) with the embedded 7-point Gauss rule.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  friend bool operator<(const Segment& l, const Segment& r) { return l.error < r.error; }
};

inline void check_finite(double fx, double x) {
  if (std::isnan(fx)) {
    throw std::domain_error("integrand returned NaN at x = " + std::to_string(x));
  }
}

template <class G>
Segment gauss_kronrod15(const G& g, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = g(center);
  check_finite(fc, center);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = g(center - dx);
    const double f2 = g(center + dx);
    check_finite(f1, center - dx);
    check_finite(f2, center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) {
      gauss += kWg[j / 2] * (f1 + f2);
    }
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

// Globally adaptive bisection on [lo, hi]: the segment with the largest
// error estimate is split until the summed error meets the tolerance.
template <class G>
NumericResult adaptive_gk(const G& g, double lo, double hi, const Tolerance& tol) {
  std::priority_queue<Segment> work;
  std::vector<Segment> frozen;  // segments too narrow to split further
  NumericResult out;

  work.push(gauss_kronrod15(g, lo, hi));
  out.evaluations = 15;

  auto totals = [&] {
    double value = 0.0;
    double error = 0.0;
    auto copy = work;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    for (const auto& s : frozen) {
      value += s.value;
      error += s.error;
    }
    return std::pair{value, error};
  };

  double value = work.top().value;
  double error = work.top().error;
  std::int64_t splits = 0;
  while (error > tol.target(value) && splits < tol.max_iter && !work.empty()) {
    const Segment worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) < 64.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
      frozen.push_back(worst);
      continue;
    }
    const Segment left = gauss_kronrod15(g, worst.lo, mid);
    const Segment right = gauss_kronrod15(g, mid, worst.hi);
    out.evaluations += 30;
    ++splits;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    if (splits % 64 == 0) {
      std::tie(value, error) = totals();
    }
  }
  std::tie(value, error) = totals();
  out.value = value;
  out.err_estimate = error;
  out.converged = error <= tol.target(value);
  return out;
}

}  // namespace detail

/// Integrates f over (lo, hi). `hi` may be +infinity, in which case the
/// interval is mapped onto t in (0, 1) through x = lo + t / (1 - t),
/// dx = dt / (1 - t)^2. The rule never samples the endpoints, so integrable
/// endpoint singularities are tolerated. A NaN from f throws
/// std::domain_error; running out of subdivisions returns converged = false.
template <RealFunction F>
NumericResult adaptive_quad(const F& f, double lo, double hi, const Tolerance& tol = kQuadTolerance) {
  tol.validate();
  if (!std::isfinite(lo) || !(lo < hi)) {
    throw std::invalid_argument("adaptive_quad requires finite lo < hi");
  }
  if (std::isinf(hi)) {
    auto mapped = [&f, lo](double t) {
      const double s = 1.0 - t;
      const double x = lo + t / s;
      const double fx = static_cast<double>(f(x));
      if (fx == 0.0) {
        return 0.0;
      }
      return fx / (s * s);
    };
    return detail::adaptive_gk(mapped, 0.0, 1.0, tol);
  }
  auto direct = [&f](double x) { return static_cast<double>(f(x)); };
  return detail::adaptive_gk(direct, lo, hi, tol);
}

/// Sums term(m) for m = start, start+1, ... until three consecutive terms
/// satisfy |term| < tol.abs and |term| < tol.rel * |partial sum|. The error
/// estimate is a geometric tail bound from the last two included terms.
template <SeriesTerm F>
NumericResult sum_series(const F& term, std::int64_t start, const Tolerance& tol = kSeriesTolerance) {
  tol.validate();
  NumericResult out;
  // Neumaier compensated summation.
  double sum = 0.0;
  double carry = 0.0;
  double last = 0.0;
  double previous = std::numeric_limits<double>::quiet_NaN();
  int small_run = 0;
  for (std::int64_t m = start; out.evaluations < tol.max_iter; ++m) {
    const double t = static_cast<double>(term(m));
    if (std::isnan(t)) {
      throw std::domain_error("series term is NaN at m = " + std::to_string(m));
    }
    ++out.evaluations;
    const double next = sum + t;
    carry += std::abs(sum) >= std::abs(t) ? (sum - next) + t : (t - next) + sum;
    sum = next;
    previous = last;
    last = t;
    const double partial = sum + carry;
    if (std::abs(t) < tol.abs && std::abs(t) < tol.rel * std::abs(partial)) {
      ++small_run;
    } else if (t == 0.0 && partial == 0.0) {
      ++small_run;
    } else {
      small_run = 0;
    }
    if (small_run >= 3) {
      out.converged = true;
      break;
    }
  }
  out.value = sum + carry;
  double ratio = 1.0;
  if (std::isfinite(previous) && previous != 0.0) {
    ratio = std::abs(last / previous);
  }
  out.err_estimate = ratio < 1.0 ? std::abs(last) * ratio / (1.0 - ratio) : std::abs(last);
  if (out.converged && out.err_estimate > tol.target(out.value)) {
    out.converged = false;
  }
  return out;
}

/// Bracketed root of f on (lo, hi) via TOMS 748. Terminates when the
/// bracket width falls below max(tol.rel * |x|, tol.abs); returns the
/// bracket end with the smaller residual.
template <RealFunction F>
double find_root(const F& f, double lo, double hi, const Tolerance& tol = {1e-14, 0.0, 200}) {
  tol.validate();
  if (!(lo < hi)) {
    throw std::invalid_argument("find_root requires lo < hi");
  }
  const double flo = f(lo);
  const double fhi = f(hi);
  if (std::isnan(flo) || std::isnan(fhi)) {
    throw std::domain_error("find_root: function is NaN at a bracket end");
  }
  if (flo == 0.0) {
    return lo;
  }
  if (fhi == 0.0) {
    return hi;
  }
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw std::invalid_argument("find_root: f(lo) and f(hi) must differ in sign");
  }
  auto done = [&tol](double a, double b) {
    const double width = std::abs(b - a);
    const double scale = std::min(std::abs(a), std::abs(b));
    return width <= std::max(tol.rel * scale, tol.abs) ||
           width <= 4.0 * std::numeric_limits<double>::epsilon() * scale;
  };
  std::uintmax_t iterations = static_cast<std::uintmax_t>(tol.max_iter);
  auto wrapped = [&f](double x) { return static_cast<double>(f(x)); };
  const auto [a, b] = boost::math::tools::toms748_solve(wrapped, lo, hi, flo, fhi, done, iterations);
  if (iterations >= static_cast<std::uintmax_t>(tol.max_iter) && !done(a, b)) {
    throw std::runtime_error("find_root: iteration limit reached");
  }
  return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

/// Central difference (f(x+h) - f(x-h)) / 2h.
template <RealFunction F>
double finite_diff(const F& f, double x, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("finite_diff requires h > 0");
  }
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Default step x * eps^(1/3), floored at eps^(1/3) for x near zero.
inline double default_step(double x) {
  const double cube_root_eps = std::cbrt(std::numeric_limits<double>::epsilon());
  return std::max(std::abs(x), 1.0) * cube_root_eps;
}

struct Derivative {
  double value;
  double err_estimate;
};

/// One Richardson step on the central difference: (4 D(h/2) - D(h)) / 3,
/// with |extrapolated - D(h/2)| as the error estimate.
template <RealFunction F>
Derivative richardson_diff(const F& f, double x, double h) {
  const double coarse = finite_diff(f, x, h);
  const double fine = finite_diff(f, x, 0.5 * h);
  const double extrapolated = (4.0 * fine - coarse) / 3.0;
  return {extrapolated, std::abs(extrapolated - fine)};
}

}  // namespace casimir::engine
