#include <gtest/gtest.h>

#include <random>

#include "jumplmi/error.hpp"
#include "jumplmi/function_classes.hpp"

using namespace jumplmi;

TEST(GammaOf, CaseTable) {
  EXPECT_DOUBLE_EQ(gamma_of(Assumption::StronglyConvex, 0.1, 1.0), -0.1);
  EXPECT_DOUBLE_EQ(gamma_of(Assumption::ConvexSmooth, 0.1, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(gamma_of(Assumption::SmoothOnly, 0.1, 2.0), 2.0);
}

TEST(Profile, MethodSpecificNu) {
  auto saga = AssumptionProfile::make(MethodId::SAGA, Assumption::ConvexSmooth, 0.1, 1.0);
  EXPECT_DOUBLE_EQ(saga.nu, -0.1);
  EXPECT_DOUBLE_EQ(saga.gamma, 0.0);
  auto sdca = AssumptionProfile::make(MethodId::SDCA, Assumption::SmoothOnly, 0.1, 1.0);
  EXPECT_DOUBLE_EQ(sdca.nu, 0.0);
  EXPECT_DOUBLE_EQ(sdca.gamma, 1.0);
  EXPECT_THROW(AssumptionProfile::make(MethodId::SDCA, Assumption::StronglyConvex, 0.1, 1.0), Error);
  EXPECT_THROW(AssumptionProfile::make(MethodId::SAGA, Assumption::StronglyConvex, 2.0, 1.0), Error);
}

TEST(Parse, NamesRoundTrip) {
  for (auto m : {MethodId::SAGA, MethodId::SAG, MethodId::Finito, MethodId::SDCA})
    EXPECT_EQ(parse_method(to_string(m)), m);
  for (auto a : {Assumption::StronglyConvex, Assumption::ConvexSmooth, Assumption::SmoothOnly})
    EXPECT_EQ(parse_assumption(to_string(a)), a);
  EXPECT_THROW(parse_method("svrg"), Error);
}

TEST(Sector, ZeroAtOrigin) { EXPECT_DOUBLE_EQ(sector_quadratic({0.0, 0.0}, {0.0, 0.0}, 1.0, -0.1), 0.0); }

TEST(Sector, BoundaryCaseIsZero) {
  const double L = 3.0;
  for (double x : {-2.0, 0.5, 7.0}) EXPECT_NEAR(sector_quadratic({x}, {L * x}, L, L), 0.0, 1e-12);
}

TEST(Sector, NonnegativeForDiagonalQuadratics) {
  std::mt19937_64 rng(1);
  const double m = 0.2, L = 2.0;
  std::uniform_real_distribution<double> curv(m, L), u(-5.0, 5.0);
  for (int t = 0; t < 1000; ++t) {
    Vector dx(4), dg(4);
    for (std::size_t k = 0; k < 4; ++k) {
      dx[k] = u(rng);
      dg[k] = curv(rng) * dx[k];
    }
    EXPECT_GE(sector_quadratic(dx, dg, L, -m), -1e-12);
  }
}

TEST(Sector, RelaxingAssumptionNeverShrinksSet) {
  std::mt19937_64 rng(2);
  const double m = 0.3, L = 1.5;
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 2000; ++t) {
    Vector dx{u(rng), u(rng)}, dg{u(rng), u(rng)};
    double sc = sector_quadratic(dx, dg, L, -m);
    double cvx = sector_quadratic(dx, dg, L, 0.0);
    double sm = sector_quadratic(dx, dg, L, L);
    if (sc >= 0.0) {
      EXPECT_GE(cvx, -1e-12);
    }
    if (cvx >= 0.0) {
      EXPECT_GE(sm, -1e-12);
    }
  }
}

TEST(Sector, DimensionMismatch) { EXPECT_THROW(sector_quadratic({1.0}, {1.0, 2.0}, 1.0, 0.0), Error); }
