#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "huygens/error.hpp"
#include "huygens/quadrature.hpp"
#include "huygens/roots.hpp"
#include "huygens/special_functions.hpp"
#include "oracles.hpp"

using namespace huygens;
using namespace huygens::numerics;

TEST(CosineIntegral, MatchesSeriesOracleBelowFour) {
  for (double z : {1e-6, 0.01, 0.1, 0.5, 1.0, 2.0, 3.0, 3.9, 4.0}) {
    EXPECT_NEAR(cosine_integral(z), oracle::ci_series(z),
                1e-13 * std::max(1.0, std::abs(oracle::ci_series(z))))
        << "z=" << z;
  }
}

TEST(CosineIntegral, MatchesReferenceTable) {
  struct Ref { double z, ci; };
  const Ref table[] = {
      {1e-8, -17.843465079050832637}, {0.5, -0.17778407880661290134},
      {1.0, 0.33740392290096813466},  {4.000001, -0.14098186129772060086},
      {5.0, -0.19002974965664387862}, {7.5, 0.11563320323793427044},
      {10.0, -0.045456433004455372635}, {20.0, 0.04441982084535331654},
      {50.0, -0.0056283863241163054402}, {100.0, -0.0051488251426104921444},
      {1000.0, 0.000826315511090682282}, {1e6, -3.4999443892272049264e-7}};
  for (const auto& r : table) {
    EXPECT_NEAR(cosine_integral(r.z), r.ci, 2e-14 * std::max(1.0, std::abs(r.ci)) + 1e-12 * std::abs(r.ci))
        << "z=" << r.z;
  }
}

TEST(CosineIntegral, ContinuousAcrossMethodSwitch) {
  const double lo = std::nextafter(4.0, 0.0), hi = std::nextafter(4.0, 10.0);
  EXPECT_NEAR(cosine_integral(lo), cosine_integral(hi), 1e-14);
}

TEST(CosineIntegral, DerivativeIsCosOverZ) {
  for (double z : {0.3, 2.0, 4.5, 12.0, 40.0}) {
    const double h = 1e-5 * z;
    const double fd = (cosine_integral(z + h) - cosine_integral(z - h)) / (2.0 * h);
    EXPECT_NEAR(fd, std::cos(z) / z, 1e-8) << "z=" << z;
  }
}

TEST(CosineIntegral, DifferenceKeepsPrecisionForTinyArguments) {
  const double lo = 1e-8 * 2.0 / 3.0, hi = 1e-8 * (2.0 / 3.0 + 0.01);
  EXPECT_NEAR(cosine_integral_difference(lo, hi), std::log(hi / lo), 1e-15);
  EXPECT_NEAR(cosine_integral_difference(3.0, 6.0),
              cosine_integral(6.0) - cosine_integral(3.0), 1e-15);
}

TEST(CosineIntegral, RejectsNonPositive) {
  EXPECT_THROW(cosine_integral(0.0), DomainError);
  EXPECT_THROW(cosine_integral(-1.0), DomainError);
}

struct KnownIntegral {
  const char* name;
  std::function<double(double)> f;
  double a, b, exact;
};

TEST(Quadrature, ErrorEstimateBoundsActualErrorOnKnownIntegrals) {
  const double pi = std::numbers::pi;
  const std::vector<KnownIntegral> cases = {
      {"x^2", [](double x) { return x * x; }, 0, 1, 1.0 / 3.0},
      {"sin", [](double x) { return std::sin(x); }, 0, pi, 2.0},
      {"exp", [](double x) { return std::exp(x); }, 0, 1, std::exp(1.0) - 1.0},
      {"lorentz", [](double x) { return 1.0 / (1.0 + x * x); }, 0, 1, pi / 4.0},
      {"sqrt", [](double x) { return std::sqrt(x); }, 0, 1, 2.0 / 3.0},
      {"log", [](double x) { return std::log(x); }, 0, 1, -1.0},
      {"inv_sqrt", [](double x) { return 1.0 / std::sqrt(x); }, 0, 1, 2.0},
      {"cos2", [](double x) { return std::cos(10 * x) * std::cos(10 * x); }, 0, 2 * pi, pi},
      {"cos50", [](double x) { return std::cos(50 * x); }, 0, 10, std::sin(500.0) / 50.0},
      {"inv", [](double x) { return 1.0 / x; }, 1, 2, std::log(2.0)},
      {"runge", [](double x) { return 1.0 / (1.0 + 25 * x * x); }, 0, 1, std::atan(5.0) / 5.0},
      {"x_sin", [](double x) { return x * std::sin(x); }, 0, pi, pi},
      {"x^9", [](double x) { return std::pow(x, 9); }, 0, 1, 0.1},
      {"abs", [](double x) { return std::abs(x); }, -1, 1, 1.0},
      {"cosh", [](double x) { return std::cosh(x); }, 0, 1, std::sinh(1.0)},
      {"gauss", [](double x) { return std::exp(-x * x); }, 0, 2, std::sqrt(pi) / 2 * std::erf(2.0)},
      {"sin2", [](double x) { return std::sin(x) * std::sin(x); }, 0, pi / 2, pi / 4},
      {"x_exp", [](double x) { return x * std::exp(x); }, 0, 1, 1.0},
      {"near_pole", [](double x) { return 1.0 / (x + 0.01); }, 0, 1, std::log(101.0)},
      {"damped", [](double x) { return std::exp(-x) * std::sin(x); }, 0, 4,
       0.5 * (1.0 - std::exp(-4.0) * (std::sin(4.0) + std::cos(4.0)))},
  };
  ASSERT_EQ(cases.size(), 20u);
  for (const auto& c : cases) {
    const auto r = integrate_1d(c.f, c.a, c.b, {1e-10, 1e-14, 10000});
    const double actual = std::abs(r.value - c.exact);
    EXPECT_LE(actual, r.err_est + 4e-16 * std::max(1.0, std::abs(c.exact))) << c.name;
    EXPECT_LE(actual, 1e-9 * std::max(1.0, std::abs(c.exact))) << c.name;
  }
}

TEST(Quadrature, EmptyAndReversedIntervals) {
  auto f = [](double x) { return x; };
  EXPECT_EQ(integrate_1d(f, 1.0, 1.0).value, 0.0);
  EXPECT_THROW(integrate_1d(f, 2.0, 1.0), DomainError);
}

TEST(Quadrature, SubdivisionLimitRaisesConvergenceError) {
  auto f = [](double x) { return std::sin(1.0 / x); };
  try {
    integrate_1d(f, 1e-6, 1.0, {1e-14, 0.0, 3});
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_TRUE(std::isfinite(e.best_estimate()));
    EXPECT_GT(e.error_estimate(), 0.0);
  }
}

TEST(Quadrature, LinearInIntegrand) {
  auto f = [](double x) { return std::cos(3 * x) / (1 + x); };
  auto g = [](double x) { return std::exp(-x) * x; };
  const double a = integrate_1d(f, 0, 5).value, b = integrate_1d(g, 0, 5).value;
  const double ab = integrate_1d([&](double x) { return 2 * f(x) - 3 * g(x); }, 0, 5).value;
  EXPECT_NEAR(ab, 2 * a - 3 * b, 1e-12);
}

TEST(Quadrature, OscillationBreakpointsFallOnPeriods) {
  const auto pts = oscillation_breakpoints(0.1, 3.0, 10.0);
  ASSERT_FALSE(pts.empty());
  const double period = 2.0 * std::numbers::pi / 10.0;
  for (double p : pts) {
    EXPECT_GT(p, 0.1);
    EXPECT_LT(p, 3.0);
    EXPECT_NEAR(std::remainder(p, period), 0.0, 1e-12);
  }
  EXPECT_TRUE(oscillation_breakpoints(0.0, 0.1, 10.0).empty());
}

TEST(Quadrature, TwoDimensionalTriangle) {
  auto f = [](double x, double y) { return x * y; };
  std::function<double(double)> lo = [](double) { return 0.0; };
  std::function<double(double)> hi = [](double x) { return x; };
  const auto r = integrate_2d(f, 0.0, 1.0, lo, hi);
  EXPECT_NEAR(r.value, 1.0 / 8.0, 1e-12);
}

TEST(Quadrature, TwoDimensionalClippedRegion) {
  // int_0^1 dx int_0^{min(0.5, x - 0.2)} dy 1, rows with x < 0.2 are empty.
  auto f = [](double, double) { return 1.0; };
  std::function<double(double)> upper = [](double x) { return std::min(0.5, x - 0.2); };
  const auto r = integrate_2d_clipped(f, 0.0, 1.0, upper, 0.0, {}, {0.2, 0.7});
  const double exact = 0.5 * 0.5 * 0.5 + 0.3 * 0.5;
  EXPECT_NEAR(r.value, exact, 1e-12);
}

TEST(Roots, AgreesWithBisectionOracle) {
  auto f = [](double x) { return std::cos(x) - x; };
  EXPECT_NEAR(find_root(f, 0.0, 1.0), oracle::bisect(f, 0.0, 1.0), 1e-12);
  auto g = [](double x) { return x * x * x - 2.0; };
  EXPECT_NEAR(find_root(g, 0.0, 5.0), std::cbrt(2.0), 1e-12);
  auto steep = [](double x) { return std::exp(50 * x) - 2.0; };
  EXPECT_NEAR(find_root(steep, -1.0, 1.0), std::log(2.0) / 50.0, 1e-12);
}

TEST(Roots, RequiresSignChange) {
  auto f = [](double x) { return x * x + 1.0; };
  EXPECT_THROW(find_root(f, -1.0, 1.0), DomainError);
}

TEST(Roots, BracketExpansion) {
  auto f = [](double x) { return x - 37.5; };
  const auto [lo, hi] = expand_bracket_upward(f, 0.0, 1.0);
  EXPECT_LE(lo, 37.5);
  EXPECT_GE(hi, 37.5);
  auto never = [](double x) { return -std::exp(-x) - 1.0; };
  EXPECT_THROW(expand_bracket_upward(never, 0.0, 1.0), UnreachableError);
}
