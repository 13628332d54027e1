#pragma once

#include <cmath>
#include <stdexcept>
#include <string_view>

namespace casimir {

/// Which route produced an EnergyValue.
enum class Method {
  direct_sum,
  poisson_resummed,
  low_T_expansion,
  high_T_asymptote,
  quadrature,
  closed_form,
  finite_difference,
};

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::direct_sum: return "direct_sum";
    case Method::poisson_resummed: return "poisson_resummed";
    case Method::low_T_expansion: return "low_T_expansion";
    case Method::high_T_asymptote: return "high_T_asymptote";
    case Method::quadrature: return "quadrature";
    case Method::closed_form: return "closed_form";
    case Method::finite_difference: return "finite_difference";
  }
  return "unknown";
}

/// Energy per unit area, pressure or density, in natural units (hbar = c = k_B = 1).
struct EnergyValue {
  double value = 0.0;
  double err_estimate = 0.0;
  Method method = Method::closed_form;
  bool converged = true;
};

/// Parallel-plate cavity: separation a, temperature T, refractive index n.
struct CavityConfig {
  double a = 1.0;
  double T = 0.0;
  double n = 1.0;

  void validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("separation a must be > 0");
    if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("temperature T must be >= 0");
    if (!(n >= 1.0) || !std::isfinite(n)) throw std::invalid_argument("refractive index n must be >= 1");
  }

  /// The dimensionless combination n a T.
  [[nodiscard]] double reduced_temperature() const { return n * a * T; }
};

}  // namespace casimir
