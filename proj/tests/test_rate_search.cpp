#include <gtest/gtest.h>

#include "jumplmi/error.hpp"
#include "jumplmi/rate_search.hpp"

using namespace jumplmi;

namespace {

SearchConfig quick() {
  SearchConfig cfg;
  cfg.restarts = 4;
  cfg.max_evals = 1500;
  cfg.rho2_tol = 1e-5;
  return cfg;
}

}  // namespace

TEST(Feasibility, SeededByCertificate) {
  SearchProblem prob{MethodId::SAGA, Assumption::StronglyConvex, 0.1, 1.0, 20, 1.0 / 3.0, SearchSpace::Reduced};
  auto certs = analytical_certificates(prob);
  ASSERT_FALSE(certs.empty());
  Witness seed{certs[0].P, certs[0].mult, certs[0].rho2, 0.0, "cert"};
  auto r = feasible_at(prob, certs[0].rho2, quick(), {seed});
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->source, "seeded");
  EXPECT_LE(search_objective(prob, certs[0].rho2, r.witness->P, r.witness->mult), 1e-9);
}

TEST(Feasibility, RhoOneIsFeasibleUnseeded) {
  for (MethodId method : {MethodId::SAGA, MethodId::Finito, MethodId::SDCA}) {
    Assumption a = method == MethodId::SDCA ? Assumption::ConvexSmooth : Assumption::StronglyConvex;
    double alpha = method == MethodId::SDCA ? 1.0 / 3.0 : 0.1;
    SearchProblem prob{method, a, 0.2, 1.0, 10, alpha, SearchSpace::Reduced};
    auto r = feasible_at(prob, 1.0, quick());
    EXPECT_TRUE(r.witness) << to_string(method) << " best " << r.best_objective;
  }
}

TEST(Feasibility, RejectsBadRho) {
  SearchProblem prob{MethodId::SAGA, Assumption::StronglyConvex, 0.1, 1.0, 10, 0.1, SearchSpace::Reduced};
  EXPECT_THROW(feasible_at(prob, 1.5, quick()), Error);
}

TEST(Feasibility, WitnessesAreNormalized) {
  SearchProblem prob{MethodId::SDCA, Assumption::ConvexSmooth, 0.1, 1.0, 10, 0.5, SearchSpace::Reduced};
  auto r = feasible_at(prob, 0.99, quick());
  ASSERT_TRUE(r.witness);
  double top = 0.0;
  for (double v : r.witness->P.p) top = std::max(top, std::abs(v));
  EXPECT_NEAR(top, 1.0, 1e-12);
  EXPECT_TRUE(r.witness->P.positive(10));
}

TEST(Bisection, SagaBeatsCertificate) {
  SearchProblem prob{MethodId::SAGA, Assumption::StronglyConvex, 0.1, 1.0, 10, 1.0 / 3.0, SearchSpace::Reduced};
  auto res = bisect_rate(prob, quick());
  ASSERT_TRUE(res.rho2_best);
  EXPECT_EQ(res.status, "witness-found");
  ASSERT_TRUE(res.analytical_rho2);
  EXPECT_LE(*res.rho2_best, *res.analytical_rho2 + 1e-6);
  EXPECT_LE(*res.rho2_best, 1.0 - 1.0 / 60.0 + 1e-6);
  ASSERT_TRUE(res.witness);
  EXPECT_LE(search_objective(prob, *res.rho2_best, res.witness->P, res.witness->mult), 1e-9);
}

TEST(Bisection, SdcaNotWorseThanCertificate) {
  SearchProblem prob{MethodId::SDCA, Assumption::ConvexSmooth, 0.1, 1.0, 20, 1.0 / 3.0, SearchSpace::Reduced};
  auto res = bisect_rate(prob, quick());
  ASSERT_TRUE(res.rho2_best);
  EXPECT_LE(*res.rho2_best, 1.0 - 0.1 / 3.0 + 1e-6);
}

TEST(Bisection, FinitoBelowBigDataThreshold) {
  // No closed-form certificate exists at n = 4, but the search still returns a rate.
  SearchProblem prob{MethodId::Finito, Assumption::StronglyConvex, 0.5, 1.0, 4, 0.2, SearchSpace::Reduced};
  EXPECT_TRUE(analytical_certificates(prob).empty());
  auto res = bisect_rate(prob, quick());
  ASSERT_TRUE(res.rho2_best);
  EXPECT_LT(*res.rho2_best, 1.0);
}

TEST(Bisection, Deterministic) {
  SearchProblem prob{MethodId::SAGA, Assumption::ConvexSmooth, 0.1, 1.0, 8, 0.2, SearchSpace::Reduced};
  auto cfg = quick();
  cfg.seed = 42;
  auto a = bisect_rate(prob, cfg);
  auto b = bisect_rate(prob, cfg);
  ASSERT_TRUE(a.rho2_best && b.rho2_best);
  EXPECT_EQ(*a.rho2_best, *b.rho2_best);
  EXPECT_EQ(a.evals, b.evals);
}

TEST(Bisection, ScaleInvariance) {
  // Scaling (m, L) by c and alpha by 1/c leaves the rate unchanged.
  auto cfg = quick();
  SearchProblem a{MethodId::SAGA, Assumption::StronglyConvex, 0.1, 1.0, 10, 0.25, SearchSpace::Reduced};
  SearchProblem b{MethodId::SAGA, Assumption::StronglyConvex, 1.0, 10.0, 10, 0.025, SearchSpace::Reduced};
  auto ra = bisect_rate(a, cfg), rb = bisect_rate(b, cfg);
  ASSERT_TRUE(ra.rho2_best && rb.rho2_best);
  EXPECT_NEAR(*ra.rho2_best, *rb.rho2_best, 1e-4);
}

TEST(SagProbe, BlockDiagonalHasNoWitnessAtPublishedRate) {
  auto cfg = quick();
  double published = sag_published_rate(0.1, 1.0, 10);
  EXPECT_NEAR(published, 0.99375, 1e-15);
  auto res = sag_probe(0.1, 1.0, 10, 1.0 / 16.0, {published}, cfg);
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_FALSE(res.rows[0].block_diagonal_witness);
  EXPECT_GT(res.rows[0].block_diagonal_best, 1e-9);
}

TEST(SagProbe, GridIsSortedDescending) {
  auto cfg = quick();
  cfg.restarts = 1;
  cfg.max_evals = 200;
  auto res = sag_probe(0.1, 1.0, 6, 1.0 / 16.0, {0.9, 1.0, 0.95}, cfg);
  ASSERT_EQ(res.rows.size(), 3u);
  EXPECT_EQ(res.rows[0].rho2, 1.0);
  EXPECT_EQ(res.rows[2].rho2, 0.9);
}
