#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "huygens/commutator.hpp"
#include "oracles.hpp"

using namespace huygens;

namespace {
const NormalizedPair kNorm = normalized_pair(2.0 / 3.0);

SpacetimeEvent at(double t, double x = 0.0) { return {t, {x, 0.0, 0.0}}; }
}  // namespace

TEST(Commutator, ThetaCoefficientExample) {
  // a(2) eta(2) = 6 in the normalized matter universe.
  const double c = commutator_theta_coefficient(kNorm.matter, at(2.0 / 3.0), at(2.0));
  EXPECT_NEAR(c, 1.0 / (48.0 * std::numbers::pi), 1e-15);
}

TEST(Commutator, MatchesOracle) {
  for (const auto& m : {kNorm.matter, kNorm.lambda}) {
    for (double ta : {0.5, 1.0, 3.0}) {
      for (double tb : {0.4, 2.0}) {
        for (double R : {0.0, 0.1, 0.7}) {
          const double want = oracle::theta_coefficient(
              conformal_time(m, ta), scale_factor(m, ta), conformal_time(m, tb),
              scale_factor(m, tb), R);
          const double got = commutator(m, at(ta), at(tb, R)).theta_part;
          EXPECT_NEAR(got, want, 1e-14 * std::max(1.0, std::abs(want)));
        }
      }
    }
  }
}

TEST(Commutator, Antisymmetric) {
  for (const auto& m : {kNorm.matter, kNorm.lambda}) {
    const auto x = at(0.9), y = at(2.5, 0.2);
    const auto xy = commutator(m, x, y), yx = commutator(m, y, x);
    EXPECT_DOUBLE_EQ(xy.theta_part, -yx.theta_part);
    ASSERT_TRUE(xy.delta_part && yx.delta_part);
    EXPECT_DOUBLE_EQ(xy.delta_part->strength_plus, -yx.delta_part->strength_minus);
  }
}

TEST(Commutator, SpacelikeVanishes) {
  const auto c = commutator(kNorm.matter, at(1.0), at(1.1, 2.0));
  EXPECT_EQ(c.theta_part, 0.0);
  ASSERT_TRUE(c.delta_part.has_value());
}

TEST(Commutator, DeltaPartAbsentAtZeroSeparation) {
  EXPECT_FALSE(commutator(kNorm.lambda, at(1.0), at(2.0)).delta_part);
}

TEST(Commutator, LightlikePairRejected) {
  const double eta = conformal_time(kNorm.matter, 1.0);
  const double tb = comoving_time(kNorm.matter, eta + 0.25);
  const SpacetimeEvent a = at(1.0);
  SpacetimeEvent b = at(tb);
  b.position[0] = (conformal_time(kNorm.matter, tb) - eta);
  EXPECT_THROW(commutator_theta_coefficient(kNorm.matter, a, b), DomainError);
}

TEST(GreenFunction, IndexAndPotential) {
  EXPECT_DOUBLE_EQ((GreenFunctionProblem{0.0, 0.0, 1.0, 1.0}.alpha()), 1.5);
  EXPECT_DOUBLE_EQ((GreenFunctionProblem{-1.0, 0.0, 1.0, 1.0}.alpha()), 1.5);
  EXPECT_DOUBLE_EQ((GreenFunctionProblem{1.0 / 3.0, 0.0, 1.0, 1.0}.potential_strength()), 0.0);
  EXPECT_DOUBLE_EQ((GreenFunctionProblem{0.0, 1.0 / 6.0, 1.0, 1.0}.potential_strength()), 0.0);
  EXPECT_THROW((GreenFunctionProblem{-1.0 / 3.0, 0.0, 1.0, 1.0}.alpha()), DomainError);
}

TEST(GreenFunction, MatterModeMatchesRiccatiBessel) {
  for (double k : {0.5, 2.0, 10.0}) {
    const GreenFunctionProblem p{0.0, 0.0, k, 2.0};
    const auto s = solve_mode_ode(p, 0.5, 4.0, 35);
    for (std::size_t i = 0; i < s.eta.size(); ++i) {
      const double want = oracle::mode_alpha32(k, 2.0, s.eta[i]);
      EXPECT_NEAR(s.g[i], want, 1e-7 * std::max(1.0, std::abs(want))) << "k=" << k;
    }
  }
}

TEST(GreenFunction, LambdaModeMatchesRiccatiBessel) {
  for (double k : {1.0, 6.0}) {
    const GreenFunctionProblem p{-1.0, 0.0, k, -1.0};
    for (double eta : {-3.0, -1.5, -0.6, -0.2}) {
      const double want = oracle::mode_alpha32(k, -1.0, eta);
      EXPECT_NEAR(mode_function(p, eta), want, 1e-7 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(GreenFunction, ConformalCouplingIsFlat) {
  const GreenFunctionProblem p{0.0, 1.0 / 6.0, 3.0, 1.0};
  const auto s = solve_mode_ode(p, 1.0, 1.0 + 2.0 * std::numbers::pi / 3.0, 20, 1e-13);
  for (std::size_t i = 0; i < s.eta.size(); ++i) {
    EXPECT_NEAR(s.g[i], 4.0 * std::numbers::pi / 3.0 * std::sin(3.0 * (s.eta[i] - 1.0)), 1e-8);
  }
}

TEST(GreenFunction, InitialConditions) {
  const GreenFunctionProblem p{0.0, 0.0, 2.0, 1.5};
  EXPECT_EQ(mode_function(p, 1.5), 0.0);
  const auto s = solve_mode_ode(p, 1.0, 2.0, 4);
  EXPECT_NEAR(s.g[2], 0.0, 1e-14);
  EXPECT_NEAR(s.dg[2], 4.0 * std::numbers::pi, 1e-12);
}

TEST(GreenFunction, RejectsSingularRange) {
  const GreenFunctionProblem p{-1.0, 0.0, 1.0, -0.5};
  EXPECT_THROW(solve_mode_ode(p, -1.0, 0.5, 10), DomainError);
  EXPECT_THROW(mode_function(p, 0.2), DomainError);
  EXPECT_THROW(solve_mode_ode(p, -0.4, -0.1, 10), DomainError);
}

TEST(Reconstruction, MatchesThetaCoefficient) {
  for (const auto& m : {kNorm.matter, kNorm.lambda}) {
    const auto a = at(2.0), b = at(2.0 / 3.0, 0.3);
    const double want = commutator_theta_coefficient(m, a, b);
    const auto rec = reconstruct_theta_part(m, a, b);
    EXPECT_NEAR(rec.value, want, 1e-3 * std::abs(want));
    // The extrapolation should improve on the smallest width.
    EXPECT_LE(std::abs(rec.value - want), std::abs(rec.estimates[2] - want) + 1e-9 * std::abs(want));
  }
}

TEST(Reconstruction, SpacelikePairIsSmall) {
  const auto a = at(1.0), b = at(1.05, 0.8);
  const auto rec = reconstruct_theta_part(kNorm.matter, a, b);
  const double scale = commutator_theta_coefficient(kNorm.matter, at(2.0), at(1.0));
  EXPECT_LT(std::abs(rec.value), 1e-3 * std::abs(scale));
}

TEST(Reconstruction, RejectsWidthsTooCloseToLightCone) {
  ReconstructionOptions o;
  o.mollifier_width = 0.2;
  EXPECT_THROW(reconstruct_theta_part(kNorm.matter, at(2.0), at(2.0 / 3.0, 0.3), o), DomainError);
}
