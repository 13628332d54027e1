#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "casimir/engine.hpp"
#include "oracles.hpp"

using namespace casimir::engine;
using std::numbers::pi;

TEST(Quad, SemiInfiniteBoseIntegral) {
  // int_0^inf x^3/(e^x - 1) dx = pi^4/15
  const auto r = adaptive_quad([](double x) { return x * x * x / std::expm1(x); }, 0.0,
                               std::numeric_limits<double>::infinity());
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, std::pow(pi, 4) / 15.0, 1e-10 * std::pow(pi, 4) / 15.0);
}

TEST(Quad, GaussianHalfLine) {
  const auto r = adaptive_quad([](double x) { return std::exp(-x * x); }, 0.0, std::numeric_limits<double>::infinity());
  EXPECT_NEAR(r.value, std::sqrt(pi) / 2.0, 1e-12);
}

TEST(Quad, FiniteIntervalMatchesSimpson) {
  auto f = [](double x) { return std::sin(x) * std::exp(-0.3 * x); };
  const auto r = adaptive_quad(f, 0.0, 7.0);
  EXPECT_NEAR(r.value, oracle::simpson(f, 0.0, 7.0, 20000), 1e-12);
}

TEST(Quad, EndpointSingularityTolerated) {
  const auto r = adaptive_quad([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-8, 0.0, 2000});
  EXPECT_NEAR(r.value, 2.0, 1e-7);
}

TEST(Quad, NaNIntegrandThrows) {
  EXPECT_THROW(adaptive_quad([](double) { return std::nan(""); }, 0.0, 1.0), std::domain_error);
}

TEST(Quad, BadIntervalThrows) {
  EXPECT_THROW(adaptive_quad([](double x) { return x; }, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(adaptive_quad([](double x) { return x; }, -std::numeric_limits<double>::infinity(), 0.0),
               std::invalid_argument);
}

TEST(Quad, ExhaustedSubdivisionsReported) {
  const auto r = adaptive_quad([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, {1e-15, 0.0, 5});
  EXPECT_FALSE(r.converged);
}

TEST(Series, Zeta2) {
  const auto r = sum_series([](std::int64_t m) { return 1.0 / (double(m) * double(m) * double(m) * double(m)); }, 1);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, std::pow(pi, 4) / 90.0, 1e-10);
}

TEST(Series, GeometricTailBound) {
  const auto r = sum_series([](std::int64_t m) { return std::pow(0.5, double(m)); }, 0);
  EXPECT_NEAR(r.value, 2.0, 1e-13);
  EXPECT_LE(std::abs(r.value - 2.0), r.err_estimate + 1e-15);
}

TEST(Series, IterationLimit) {
  const auto r = sum_series([](std::int64_t m) { return 1.0 / double(m); }, 1, {1e-10, 1e-14, 1000});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.evaluations, 1000);
}

TEST(Root, CircuitQuadratic) {
  // x (2.01 - x/100) - 1 = 0 is the circuit eigenvalue equation in x = omega^2
  auto f = [](double x) { return x * (2.01 - x / 100.0) - 1.0; };
  const double x = find_root(f, 0.0, 1.0);
  EXPECT_NEAR(x, oracle::small_quadratic_root(201.0, 100.0), 1e-14);
  EXPECT_NEAR(x, 0.4987500078124023, 1e-14);
}

TEST(Root, MatchesBisection) {
  auto f = [](double x) { return std::cos(x) - x; };
  EXPECT_NEAR(find_root(f, 0.0, 1.0), oracle::bisect(f, 0.0, 1.0), 1e-14);
}

TEST(Root, SameSignThrows) {
  EXPECT_THROW(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), std::invalid_argument);
}

TEST(Diff, CentralAndRichardson) {
  auto f = [](double x) { return std::exp(x); };
  EXPECT_NEAR(finite_diff(f, 1.0, 1e-5), std::exp(1.0), 1e-9);
  const auto d = richardson_diff(f, 1.0, 1e-2);
  EXPECT_NEAR(d.value, std::exp(1.0), 1e-10);
  EXPECT_THROW(finite_diff(f, 1.0, 0.0), std::invalid_argument);
}

TEST(Tolerance, Validation) {
  EXPECT_THROW((Tolerance{0.0, 1e-14, 10}).validate(), std::invalid_argument);
  EXPECT_THROW((Tolerance{1e-10, -1.0, 10}).validate(), std::invalid_argument);
  EXPECT_THROW((Tolerance{1e-10, 0.0, 0}).validate(), std::invalid_argument);
}
