#include <gtest/gtest.h>

#include "jumplmi/serialize.hpp"

using namespace jumplmi;

TEST(Serialize, CertificateRoundTrip) {
  for (auto c : {saga_certificate(Assumption::ConvexSmooth, 0.1, 1.0, 20, 0.25),
                 finito_certificate(Assumption::StronglyConvex, 0.01, 1.0, 71),
                 sdca_certificate(Assumption::SmoothOnly, 0.5, 1.0, 10, 0.5 / 3.5),
                 saga_certificate(Assumption::StronglyConvex, 0.1, 1.0, 10, 0.2)}) {
    json j = c;
    RateCertificate back = json::parse(j.dump()).get<RateCertificate>();
    EXPECT_EQ(back.method, c.method);
    EXPECT_EQ(back.assumption, c.assumption);
    EXPECT_EQ(back.n, c.n);
    EXPECT_EQ(back.alpha, c.alpha);
    EXPECT_EQ(back.rho2, c.rho2);
    EXPECT_EQ(back.P.p, c.P.p);
    EXPECT_EQ(back.mult.lambda2, c.mult.lambda2);
    EXPECT_EQ(back.b, c.b);
    EXPECT_EQ(back.alternatives.size(), c.alternatives.size());
    EXPECT_EQ(verify_certificate(back).feasible, c.verified);
    EXPECT_EQ(json(back), j);
  }
}

TEST(Serialize, InvariantPRoundTrip) {
  StructuredP P = StructuredP::sag_invariant(1.0, 2.0, -0.1, 0.05);
  StructuredP back = json(P).get<StructuredP>();
  EXPECT_EQ(back.form, StructuredP::Form::PermutationInvariant);
  EXPECT_EQ(back.p, P.p);
}

TEST(Serialize, RejectsWrongParameterCount) {
  json j = StructuredP::finito(1, 2, 3, 4, 5);
  j["p"] = {1.0, 2.0};
  EXPECT_ANY_THROW(j.get<StructuredP>());
}

TEST(Serialize, BundleAndReport) {
  auto c = saga_certificate(Assumption::StronglyConvex, 0.1, 1.0, 100, 1.0 / 3.0);
  json b = certificate_bundle(c);
  EXPECT_EQ(b["nsd_blocks"].size(), 2u);
  json r = verify_certificate(c);
  EXPECT_TRUE(r["feasible"].get<bool>());
}
