#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "jumplmi/error.hpp"
#include "jumplmi/simulation.hpp"

using namespace jumplmi;

TEST(Generator, AverageSpectrumSpansMToL) {
  for (Assumption a : {Assumption::StronglyConvex, Assumption::ConvexSmooth, Assumption::SmoothOnly}) {
    for (std::size_t n : {3u, 10u, 40u}) {
      const double m = 0.05, L = 2.0;
      auto q = generate_problem(MethodId::SAGA, a, m, L, n, 4, 9);
      Vector h = q.average_hessian();
      EXPECT_NEAR(*std::min_element(h.begin(), h.end()), m, 1e-12);
      EXPECT_NEAR(*std::max_element(h.begin(), h.end()), L, 1e-12);
      double lo = a == Assumption::StronglyConvex ? m : (a == Assumption::ConvexSmooth ? 0.0 : -L);
      for (double d : q.D) {
        EXPECT_GE(d, lo - 1e-12);
        EXPECT_LE(d, L + 1e-12);
      }
      if (a == Assumption::SmoothOnly) {
        EXPECT_LT(*std::min_element(q.D.begin(), q.D.end()), 0.0);
      }
    }
  }
}

TEST(Generator, InfeasibleClasses) {
  try {
    generate_problem(MethodId::SAGA, Assumption::SmoothOnly, 0.9, 1.0, 3, 2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleClass);
  }
  EXPECT_THROW(generate_problem(MethodId::SAGA, Assumption::StronglyConvex, 0.1, 1.0, 1, 2, 1), Error);
  EXPECT_THROW(generate_problem(MethodId::SAGA, Assumption::StronglyConvex, 2.0, 1.0, 5, 2, 1), Error);
}

TEST(Generator, DegenerateSmallCase) {
  auto q = generate_problem(MethodId::SAGA, Assumption::StronglyConvex, 1.0, 1.0, 2, 1, 0);
  EXPECT_NEAR(q.D[0], 1.0, 1e-15);
  EXPECT_NEAR(q.D[1], 1.0, 1e-15);
}

TEST(Generator, SdcaKeepsRegularizerOutside) {
  auto q = generate_problem(MethodId::SDCA, Assumption::ConvexSmooth, 0.3, 1.0, 6, 2, 4);
  EXPECT_DOUBLE_EQ(q.regularizer, 0.3);
  auto s = generate_problem(MethodId::SAGA, Assumption::ConvexSmooth, 0.3, 1.0, 6, 2, 4);
  EXPECT_DOUBLE_EQ(s.regularizer, 0.0);
}

TEST(Runner, ZeroStepKeepsIterate) {
  auto q = generate_problem(MethodId::SAGA, Assumption::StronglyConvex, 0.1, 1.0, 5, 2, 3);
  Vector xi0(12, 0.0);
  xi0[10] = 1.0;
  xi0[11] = -2.0;
  MethodRunner run(MethodId::SAGA, q, 0.0, xi0);
  for (std::size_t i = 1; i <= 5; ++i) run.step(i);
  EXPECT_EQ(run.x()[0], 1.0);
  EXPECT_EQ(run.x()[1], -2.0);
  EXPECT_EQ(run.gradient_evals(), 5);
}

TEST(Runner, OneGradientPerStep) {
  auto q = generate_problem(MethodId::Finito, Assumption::StronglyConvex, 0.5, 1.0, 10, 5, 1);
  SimulationConfig cfg;
  cfg.iters = 60;
  cfg.trials = 7;
  auto tr = run_method(MethodId::Finito, q, 0.2, StructuredP::finito(1, 0, 0, 1, 0), 0.99, cfg);
  EXPECT_EQ(tr.gradient_evals, 60 * 7);
}

TEST(Sampling, IndexIsDeterministicAndInRange) {
  std::vector<int> counts(7, 0);
  for (std::uint64_t t = 0; t < 7000; ++t) {
    std::size_t i = sample_index(3, t, t % 11, 7);
    ASSERT_LT(i, 7u);
    ++counts[i];
    EXPECT_EQ(i, sample_index(3, t, t % 11, 7));
  }
  for (int c : counts) EXPECT_GT(c, 800);
}

TEST(Contraction, ZeroAtEquilibrium) {
  auto cert = saga_certificate(Assumption::StronglyConvex, 0.2, 1.0, 8, 0.3);
  auto q = generate_problem(MethodId::SAGA, Assumption::StronglyConvex, 0.2, 1.0, 8, 3, 2);
  auto eq = equilibrium(MethodId::SAGA, q);
  auto rep = check_onestep_contraction(cert, q, {eq.xistar});
  EXPECT_NEAR(rep.max_violation, 0.0, 1e-14);
}

TEST(Contraction, CertificatesContractOnSampledStates) {
  struct Case {
    RateCertificate cert;
    Assumption cls;
  };
  std::vector<Case> cases = {
      {saga_certificate(Assumption::StronglyConvex, 0.2, 1.0, 8, 0.3), Assumption::StronglyConvex},
      {saga_certificate(Assumption::ConvexSmooth, 0.2, 1.0, 12, 0.25), Assumption::ConvexSmooth},
      {finito_certificate(Assumption::StronglyConvex, 0.5, 1.0, 10), Assumption::StronglyConvex},
      {sdca_certificate(Assumption::ConvexSmooth, 0.2, 1.0, 15, 1.0 / 4.0), Assumption::ConvexSmooth},
      {sdca_certificate(Assumption::SmoothOnly, 0.5, 1.0, 6, 0.5 / 2.5), Assumption::SmoothOnly},
  };
  std::size_t total = 0;
  for (const auto& c : cases) {
    ASSERT_TRUE(c.cert.verified) << c.cert.provenance;
    auto q = generate_problem(c.cert.method, c.cls, c.cert.m, c.cert.L, c.cert.n, 3, 77);
    auto states = sample_states(c.cert.method, q, c.cert.alpha, 120, 5);
    auto rep = check_onestep_contraction(c.cert, q, states);
    EXPECT_LE(rep.max_relative, 1e-9) << c.cert.provenance;
    total += rep.states;
  }
  EXPECT_GE(total, 500u);
}

TEST(Contraction, TooFastRateIsDetected) {
  auto cert = saga_certificate(Assumption::StronglyConvex, 0.2, 1.0, 8, 0.3);
  cert.rho2 -= 0.05;
  auto q = generate_problem(MethodId::SAGA, Assumption::StronglyConvex, 0.2, 1.0, 8, 3, 2);
  auto rep = check_onestep_contraction(cert, q, sample_states(MethodId::SAGA, q, cert.alpha, 50, 1));
  EXPECT_GT(rep.max_relative, 1e-6);
}

TEST(Simulation, EnvelopeHoldsAndRateFits) {
  auto cert = saga_certificate(Assumption::StronglyConvex, 0.5, 1.0, 20, 1.0 / 3.0);
  auto q = generate_problem(MethodId::SAGA, Assumption::StronglyConvex, 0.5, 1.0, 20, 5, 0);
  SimulationConfig cfg;
  cfg.iters = 150;
  cfg.trials = 100;
  auto tr = run_method(MethodId::SAGA, q, cert.alpha, cert.P, cert.rho2, cfg);
  ASSERT_EQ(tr.mean_V.size(), 151u);
  EXPECT_GT(tr.V0, 0.0);
  auto er = empirical_rate(tr);
  EXPECT_TRUE(er.envelope_ok);
  EXPECT_LE(er.fitted_rho2, cert.rho2 + 1e-3);
  EXPECT_GT(er.fitted_rho2, 0.5);

  std::ostringstream os;
  write_trace_csv(tr, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "k,mean_V,stderr_V,envelope,envelope_status,mean_dist2,cond_envelope,mean_xi_dist2");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_NE(line.find(",ok,"), std::string::npos);
  }
  EXPECT_EQ(rows, 151);
}

TEST(Simulation, SameSeedSameTrace) {
  auto q = generate_problem(MethodId::SDCA, Assumption::ConvexSmooth, 0.2, 1.0, 10, 2, 3);
  SimulationConfig cfg;
  cfg.iters = 30;
  cfg.trials = 5;
  cfg.seed = 12;
  auto a = run_method(MethodId::SDCA, q, 1.0 / 3.0, StructuredP::sdca(1, 0), 0.9, cfg);
  auto b = run_method(MethodId::SDCA, q, 1.0 / 3.0, StructuredP::sdca(1, 0), 0.9, cfg);
  EXPECT_EQ(a.mean_V, b.mean_V);
}

TEST(EmpiricalRateTest, RejectsShortOrDegenerateTraces) {
  SimulationTrace tr;
  tr.trials = 200;
  tr.mean_V.assign(10, 1.0);
  EXPECT_THROW(empirical_rate(tr), Error);
  tr.mean_V.assign(60, 0.0);
  tr.k.resize(60);
  tr.stderr_V.assign(60, 0.0);
  tr.envelope.assign(60, 0.0);
  try {
    empirical_rate(tr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateTrace);
  }
}
