#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "casimir/matsubara.hpp"
#include "oracles.hpp"

using namespace casimir;
using namespace casimir::matsubara;
using oracle::rel;
using std::numbers::pi;
namespace fz = oracle::frozen;

TEST(FreeEnergy, ZeroTemperatureClosedForm) {
  const auto f = free_energy_T0({1.0, 0.0, 1.0});
  EXPECT_NEAR(f.value, -pi * pi / 720.0, 1e-17);
  EXPECT_EQ(f.method, Method::closed_form);
  EXPECT_NEAR(free_energy_T0({2.0, 0.0, 3.0}).value, -pi * pi / (720.0 * 3.0 * 8.0), 1e-17);
}

TEST(FreeEnergy, FrozenValues) {
  EXPECT_LT(rel(fz::F_T5, free_energy({1.0, 5.0, 1.0}).value), 1e-10);
  EXPECT_LT(rel(fz::F_T001, free_energy({1.0, 0.01, 1.0}).value), 1e-10);
  EXPECT_LT(rel(fz::F_T01, free_energy({1.0, 0.1, 1.0}).value), 1e-10);
  EXPECT_LT(rel(fz::F_T01_n2, free_energy({1.0, 0.1, 2.0}).value), 1e-10);
  EXPECT_LT(rel(fz::F_T1, free_energy({1.0, 1.0, 1.0}).value), 1e-10);
}

TEST(FreeEnergy, HighTemperatureIsZeroMode) {
  // only the m = 0 term survives: F -> -zeta(3) T / (8 pi a^2)
  const double T = 5.0;
  EXPECT_LT(rel(-fz::zeta3 * T / (8.0 * pi), free_energy({1.0, T, 1.0}).value), 1e-12);
}

TEST(FreeEnergy, LowTemperatureForm) {
  EXPECT_LT(rel(fz::F_T01, free_energy_lowT({1.0, 0.1, 1.0}).value), 1e-12);
  EXPECT_THROW(free_energy({1.0, 0.0, 1.0}), std::domain_error);
}

TEST(InternalEnergy, DirectFrozen) {
  const std::pair<double, double> cases[] = {{0.05, fz::U_T005}, {0.1, fz::U_T01}, {0.2, fz::U_T02},
                                             {0.3, fz::U_T03},   {0.5, fz::U_T05}, {1.0, fz::U_T1},
                                             {2.0, fz::U_T2},    {5.0, fz::U_T5}};
  for (auto [T, U] : cases) {
    const auto r = internal_energy_direct({1.0, T, 1.0});
    EXPECT_TRUE(r.converged);
    EXPECT_LT(rel(U, r.value), 1e-12) << T;
    EXPECT_LT(rel(oracle::internal_energy_bruteforce(1.0, T, 1.0), r.value), 1e-12) << T;
  }
}

TEST(InternalEnergy, ResummedFrozen) {
  for (auto [T, U] : {std::pair{0.05, fz::U_T005}, {0.2, fz::U_T02}, {2.0, fz::U_T2}, {5.0, fz::U_T5}}) {
    const auto r = internal_energy_resummed({1.0, T, 1.0});
    EXPECT_TRUE(r.converged) << T;
    EXPECT_EQ(r.method, Method::poisson_resummed);
    EXPECT_LT(rel(U, r.value), 1e-12) << T;
  }
}

TEST(InternalEnergy, LogSumIdentity) {
  // the two frozen references agree: U(T=1) = 4 pi sum m^2 ln(1 - e^{-4 pi m})
  EXPECT_LT(rel(fz::U_T1, 4.0 * pi * fz::log_sum_4pi), 1e-12);
}

TEST(InternalEnergy, HighTAsymptote) {
  const CavityConfig c{1.0, 1.0, 1.0};
  const auto h = internal_energy_highT(c);
  EXPECT_NEAR(h.value, -4.0 * pi * std::exp(-4.0 * pi), 1e-20);
  // leading correction: m = 1 gives 4 e^{-alpha}, m = 2 gives e^{-alpha}/2
  const double dev = rel(internal_energy_direct(c).value, h.value);
  EXPECT_NEAR(dev, 4.5 * std::exp(-4.0 * pi), 0.1 * std::exp(-4.0 * pi));
}

TEST(InternalEnergy, LowTExpansion) {
  const auto lo = internal_energy_lowT({1.0, 0.1, 1.0});
  EXPECT_LT(rel(fz::U_lowT_T01, lo.value), 1e-13);
  EXPECT_LT(rel(fz::U_T01, lo.value), 1e-4);
}

TEST(InternalEnergy, Dispatcher) {
  EXPECT_EQ(internal_energy({1.0, 0.0, 1.0}).method, Method::closed_form);
  EXPECT_EQ(internal_energy({1.0, 0.1, 1.0}).method, Method::poisson_resummed);
  EXPECT_EQ(internal_energy({1.0, 1.0, 1.0}).method, Method::direct_sum);
}

TEST(InternalEnergy, ThermodynamicRoute) {
  for (double T : {0.3, 1.0, 2.0}) {
    const auto u = internal_energy_from_F({1.0, T, 1.0});
    EXPECT_EQ(u.method, Method::finite_difference);
    EXPECT_LT(rel(internal_energy_direct({1.0, T, 1.0}).value, u.value), 1e-6) << T;
  }
}

TEST(InternalEnergy, ReducedTemperatureScaling) {
  // at fixed naT, U / (n^2 T^3) is invariant
  const auto u1 = internal_energy_direct({1.0, 0.5, 1.0}).value / (0.125);
  const auto u2 = internal_energy_direct({0.5, 0.5, 2.0}).value / (4.0 * 0.125);
  EXPECT_LT(rel(u1, u2), 1e-13);
}

TEST(Pressure, FrozenAndLimits) {
  EXPECT_LT(rel(fz::P_T1, pressure({1.0, 1.0, 1.0}).value), 1e-9);
  EXPECT_LT(rel(-pi * pi / 240.0, pressure({1.0, 0.0, 1.0}).value), 1e-9);
  // classical limit -zeta(3) T / (4 pi a^3)
  EXPECT_LT(rel(-fz::zeta3 * 5.0 / (4.0 * pi), pressure({1.0, 5.0, 1.0}).value), 1e-8);
}

TEST(Matsubara, InvalidConfig) {
  EXPECT_THROW(free_energy({0.0, 1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(internal_energy_direct({1.0, -1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(internal_energy_direct({1.0, 1.0, 0.5}), std::invalid_argument);
}
