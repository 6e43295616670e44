#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jumplmi/function_classes.hpp"
#include "jumplmi/lmi.hpp"

namespace jumplmi {

struct LyapunovWeight {
  std::string term;
  double weight;
};

struct RateCertificate {
  MethodId method = MethodId::SAGA;
  Assumption assumption = Assumption::StronglyConvex;
  double m = 0.0;
  double L = 0.0;
  std::size_t n = 0;
  double alpha = 0.0;
  std::optional<double> b;
  double rho2 = 1.0;
  StructuredP P;
  MultiplierPair mult;
  std::vector<LyapunovWeight> lyapunov_weights;
  std::string provenance;
  std::vector<std::string> notes;
  bool verified = false;
  // A previously known rate the certificate is expected not to exceed.
  std::optional<double> reference_rho2;
  std::vector<RateCertificate> alternatives;

  AssumptionProfile profile() const;
};

RateCertificate saga_certificate(Assumption assumption, double m, double L, std::size_t n, double alpha,
                                 std::optional<double> b = std::nullopt);
RateCertificate saga_mn_step_certificate(Assumption assumption, double m, double L, std::size_t n);
RateCertificate finito_certificate(Assumption assumption, double m, double L, std::size_t n);
RateCertificate sdca_certificate(Assumption assumption, double m, double L, std::size_t n, double alpha);

// Stepsize used when none is given: 1/(3L) for SAGA sc/cvx, m/(4L^2) for SAGA smooth,
// the fixed Finito stepsize, 1/(L+mn) and m/(L^2+m^2 n) for SDCA cvx/smooth, 1/(16L) for SAG.
double default_stepsize(MethodId method, Assumption assumption, double m, double L, std::size_t n);

// Stepsize fixed by the Finito certificate for the given assumption.
double finito_stepsize(Assumption assumption, double m, double L, std::size_t n);

struct VerificationReport {
  bool feasible = false;
  bool P_positive = false;
  BundleReport reduced;
  std::optional<BundleReport> relaxed;
  std::string detail;
};

// The reduced bundle the certificate claims is feasible.
LmiBundle certificate_bundle(const RateCertificate& c);
VerificationReport verify_certificate(const RateCertificate& c, double tol = 1e-8);

struct FullCheck {
  bool feasible = false;
  double max_scaled = 0.0;
  std::size_t dim = 0;
};
// Checks the full (state + n)-dimensional LMI at the certificate point.
FullCheck verify_certificate_full(const RateCertificate& c, double tol = 1e-8);

// ceil(ln(1/eps) / (-ln rho2)); returns 0 for rho2 == 0 and nullopt for rho2 >= 1.
std::optional<long long> iteration_complexity(double rho2, double eps = 1e-6);

}  // namespace jumplmi
