#include "jumplmi/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jumplmi/error.hpp"

namespace jumplmi {

namespace {

double dn(std::size_t n) { return static_cast<double>(n); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_common(double m, double L, std::size_t n) {
  if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "m must be positive");
  if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "L must be positive");
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "n must be >= 2");
}

void require_stepsize(double alpha, double upper, const std::string& inequality) {
  if (!(alpha > 0.0) || alpha > upper * (1.0 + 1e-12))
    throw Error(ErrorCode::StepsizeOutOfRange, "requires 0 < " + inequality + " (alpha=" + fmt(alpha) +
                                                   ", bound=" + fmt(upper) + ")");
}

RateCertificate finish(RateCertificate c) {
  c.verified = verify_certificate(c).feasible;
  return c;
}

void saga_weights(RateCertificate& c) {
  c.lyapunov_weights = {{"|x - x*|^2", 1.0}, {"sum_i |y_i - grad f_i(x*)|^2", c.P[0] / c.P[1]}};
}

RateCertificate saga_point(Assumption a, double m, double L, std::size_t n, double alpha, double rho2, double p1,
                           double p2, MultiplierPair mult, std::string provenance) {
  RateCertificate c;
  c.method = MethodId::SAGA;
  c.assumption = a;
  c.m = m;
  c.L = L;
  c.n = n;
  c.alpha = alpha;
  c.rho2 = rho2;
  c.P = StructuredP::saga(p1, p2);
  c.mult = mult;
  c.provenance = std::move(provenance);
  saga_weights(c);
  return c;
}

double saga_sc_rate_a(double m, double L, double nn, double alpha) {
  return 1.0 - std::min((2.0 * L * alpha - 1.0) / ((L * alpha - 1.0) * nn),
                        2.0 * m * alpha - alpha * m * m / ((1.0 - L * alpha) * L));
}

double saga_sc_rate_b(double m, double L, double nn, double alpha) {
  return 1.0 - std::min((9.0 * L * alpha - 4.0) / ((3.0 * L * alpha - 4.0) * nn),
                        2.0 * m * alpha - 3.0 * alpha * m * m / ((4.0 - 3.0 * L * alpha) * L));
}

double saga_cvx_rate(double m, double L, double nn, double alpha, double b) {
  return 1.0 - std::min((2.0 * L * alpha - b) / ((L * alpha - b) * nn),
                        2.0 * (1.0 - b) * m * alpha - m * m * (1.0 - b) * (1.0 - b) * alpha / ((2.0 - b - L * alpha) * L));
}

double saga_smooth_rate(double m, double L, double nn, double alpha, double b) {
  return 1.0 - std::min((b - 2.0) / ((b - 1.0) * nn), 1.5 * m * alpha - 2.0 * b * L * L * alpha * alpha);
}

}  // namespace

AssumptionProfile RateCertificate::profile() const { return AssumptionProfile::make(method, assumption, m, L); }

RateCertificate saga_certificate(Assumption assumption, double m, double L, std::size_t n, double alpha,
                                 std::optional<double> b) {
  require_common(m, L, n);
  if (L < m) throw Error(ErrorCode::InvalidArgument, "requires m <= L");
  const double nn = dn(n);
  switch (assumption) {
    case Assumption::StronglyConvex: {
      require_stepsize(alpha, 1.0 / (2.0 * L), "alpha <= 1/(2L)");
      RateCertificate first = finish(saga_point(assumption, m, L, n, alpha, saga_sc_rate_a(m, L, nn, alpha), 1.0 / L,
                                                1.0 / alpha, {0.0, 1.0 / L},
                                                "saga/sc: p1=1/L, p2=1/alpha, lambda1=0, lambda2=1/L"));
      if (alpha <= 4.0 / (9.0 * L)) {
        RateCertificate second = finish(saga_point(assumption, m, L, n, alpha, saga_sc_rate_b(m, L, nn, alpha),
                                                   2.0 / (3.0 * L), 1.0 / alpha, {0.0, 1.0 / L},
                                                   "saga/sc: p1=2/(3L), p2=1/alpha, lambda1=0, lambda2=1/L"));
        if (second.rho2 < first.rho2) std::swap(first, second);
        first.alternatives.push_back(second);
      }
      return first;
    }
    case Assumption::ConvexSmooth: {
      require_stepsize(alpha, 1.0 / (2.0 * L), "alpha <= 1/(2L)");
      double bb = b.value_or(std::max(2.0 * L * alpha, 5.0 / 6.0));
      if (bb < 2.0 * L * alpha * (1.0 - 1e-12) || bb > 1.0)
        throw Error(ErrorCode::BOutOfRange, "requires 2 L alpha <= b <= 1 (b=" + fmt(bb) + ")");
      RateCertificate c = saga_point(assumption, m, L, n, alpha, saga_cvx_rate(m, L, nn, alpha, bb), bb / L,
                                     1.0 / alpha, {(1.0 - bb) / L, bb / L},
                                     "saga/cvx: p1=b/L, p2=1/alpha, lambda1=(1-b)/L, lambda2=b/L");
      c.b = bb;
      if (!b) c.notes.push_back("b defaulted to max(2 L alpha, 5/6)");
      return finish(c);
    }
    case Assumption::SmoothOnly: {
      require_stepsize(alpha, 3.0 * m / (8.0 * L * L), "alpha <= 3m/(8L^2)");
      const double bmax = 3.0 * m / (4.0 * alpha * L * L);
      double bb = b.value_or(std::min(3.0, bmax));
      if (bb < 2.0 || bb > bmax * (1.0 + 1e-12))
        throw Error(ErrorCode::BOutOfRange, "requires 2 <= b <= 3m/(4 alpha L^2) (b=" + fmt(bb) + ")");
      const double rho2 = saga_smooth_rate(m, L, nn, alpha, bb);
      RateCertificate c = saga_point(assumption, m, L, n, alpha, rho2, bb * alpha, 1.0 / alpha, {1.0 / L, bb * alpha},
                                     "saga/smooth: p1=b*alpha, p2=1/alpha, lambda1=1/L, lambda2=b*alpha");
      c.b = bb;
      if (!b) c.notes.push_back("b defaulted to min(3, 3m/(4 alpha L^2))");
      // The competing candidate p1 = b*alpha^2 is evaluated and its verdict recorded.
      RateCertificate other = saga_point(assumption, m, L, n, alpha, rho2, bb * alpha * alpha, 1.0 / alpha,
                                         {1.0 / L, bb * alpha * alpha}, "candidate p1=b*alpha^2");
      bool other_ok = verify_certificate(other).feasible;
      c.notes.push_back(std::string("candidate p1=b*alpha^2, lambda2=b*alpha^2 ") +
                        (other_ok ? "also verifies" : "fails the LMI check"));
      return finish(c);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown assumption");
}

RateCertificate saga_mn_step_certificate(Assumption assumption, double m, double L, std::size_t n) {
  require_common(m, L, n);
  if (L < m) throw Error(ErrorCode::InvalidArgument, "requires m <= L");
  const double nn = dn(n);
  const double mnL = m * nn + L;
  switch (assumption) {
    case Assumption::StronglyConvex: {
      const double alpha = 1.0 / (2.0 * mnL);
      RateCertificate c;
      if (L >= 2.0 * m) {
        c = saga_point(assumption, m, L, n, alpha, saga_sc_rate_a(m, L, nn, alpha), 1.0 / L, 1.0 / alpha,
                       {0.0, 1.0 / L}, "saga/sc/alpha=1/(2(mn+L)), L>=2m: p1=1/L, p2=1/alpha, lambda1=0, lambda2=1/L");
      } else {
        const double rho2 =
            1.0 - std::min((15.0 * m * nn - L) / (nn * (15.0 * m * nn + 9.0 * L)),
                           m / mnL - 2.0 * m * m / ((3.0 * L + 5.0 * m * nn) * L));
        c = saga_point(assumption, m, L, n, alpha, rho2, 0.75 / L, 1.0 / alpha, {0.0, 1.0 / L},
                       "saga/sc/alpha=1/(2(mn+L)), L<2m: p1=0.75/L, p2=1/alpha, lambda1=0, lambda2=1/L");
      }
      c.reference_rho2 = 1.0 - m / (2.0 * mnL);
      return finish(c);
    }
    case Assumption::ConvexSmooth: {
      const double alpha = 1.0 / (3.0 * mnL);
      const double b = 2.0 / 3.0;
      RateCertificate c = saga_point(assumption, m, L, n, alpha, saga_cvx_rate(m, L, nn, alpha, b), b / L, 1.0 / alpha,
                                     {(1.0 - b) / L, b / L},
                                     "saga/cvx/alpha=1/(3(mn+L)), b=2/3: p1=b/L, p2=1/alpha, lambda1=(1-b)/L, lambda2=b/L");
      c.b = b;
      c.reference_rho2 = 1.0 - m / (6.0 * mnL);
      return finish(c);
    }
    case Assumption::SmoothOnly: break;
  }
  throw Error(ErrorCode::InvalidArgument, "the known-stepsize SAGA variants cover sc and cvx only");
}

double finito_stepsize(Assumption assumption, double m, double L, std::size_t n) {
  switch (assumption) {
    case Assumption::StronglyConvex: return 1.0 / (5.0 * L);
    case Assumption::ConvexSmooth: return 1.0 / (8.0 * L);
    case Assumption::SmoothOnly: return 1.0 / (2.0 * dn(n) * m);
  }
  return 0.0;
}

RateCertificate finito_certificate(Assumption assumption, double m, double L, std::size_t n) {
  require_common(m, L, n);
  if (L < m) throw Error(ErrorCode::InvalidArgument, "requires m <= L");
  const double nn = dn(n);
  const double alpha = finito_stepsize(assumption, m, L, n);
  double p1 = 0, p4 = 0, rho2 = 1;
  MultiplierPair mult;
  std::string prov;
  switch (assumption) {
    case Assumption::StronglyConvex:
      if (nn * nn * m < 50.0 * L * (1.0 - 1e-12))
        throw Error(ErrorCode::BigDataConditionViolated, "requires n >= sqrt(50L/m)");
      p1 = alpha / L;
      p4 = 0.5 * m * alpha;
      mult = {0.0, alpha / L};
      rho2 = 1.0 - std::min(1.0 / (2.0 * nn), m / (20.0 * L));
      prov = "finito/sc/alpha=1/(5L): p1=alpha/L, p4=0.5 m alpha, lambda1=0, lambda2=alpha/L";
      break;
    case Assumption::ConvexSmooth:
      if (nn * nn * m < 64.0 * L * (1.0 - 1e-12))
        throw Error(ErrorCode::BigDataConditionViolated, "requires n >= sqrt(64L/m)");
      p1 = alpha / (2.0 * L);
      p4 = 0.5 * m * alpha;
      mult = {alpha / (2.0 * L), alpha / (2.0 * L)};
      rho2 = 1.0 - std::min(1.0 / (3.0 * nn), 5.0 * m / (176.0 * L));
      prov = "finito/cvx/alpha=1/(8L): p1=alpha/(2L), p4=0.5 m alpha, lambda1=lambda2=alpha/(2L)";
      break;
    case Assumption::SmoothOnly:
      if (nn * m * m < 48.0 * L * L * (1.0 - 1e-12))
        throw Error(ErrorCode::BigDataConditionViolated, "requires n >= 48 L^2/m^2");
      p1 = 4.0 * alpha * alpha;
      p4 = 0.75 * m * alpha;
      mult = {alpha / L, 4.0 * alpha * alpha};
      rho2 = 1.0 - 1.0 / (3.0 * nn);
      prov = "finito/smooth/alpha=1/(2nm): p1=4 alpha^2, p4=0.75 m alpha, lambda1=alpha/L, lambda2=4 alpha^2";
      break;
  }
  RateCertificate c;
  c.method = MethodId::Finito;
  c.assumption = assumption;
  c.m = m;
  c.L = L;
  c.n = n;
  c.alpha = alpha;
  c.rho2 = rho2;
  c.P = finito_relaxed_slice(n, alpha, p1, p4);
  c.mult = mult;
  c.provenance = prov + "; P on the slice p2=alpha^2, p3=-alpha/n, p5=1/n^2";
  c.lyapunov_weights = {{"sum_i |x_i - x*|^2", p4}, {"sum_i |y_i - grad f_i(x*)|^2", p1}, {"|v - x*|^2", 1.0}};
  return finish(c);
}

RateCertificate sdca_certificate(Assumption assumption, double m, double L, std::size_t n, double alpha) {
  require_common(m, L, n);
  const double nn = dn(n);
  double p1 = 0, p2 = 0;
  MultiplierPair mult;
  std::string prov;
  RateCertificate c;
  switch (assumption) {
    case Assumption::ConvexSmooth: {
      require_stepsize(alpha, 2.0 / (L + 2.0 * m * nn), "alpha <= 2/(L+2mn)");
      break;
    }
    case Assumption::SmoothOnly: {
      require_stepsize(alpha, m / (L * L + m * m * nn), "alpha <= m/(L^2+m^2 n)");
      break;
    }
    case Assumption::StronglyConvex:
      throw Error(ErrorCode::InvalidArgument, "SDCA certificates cover cvx and smooth f_i");
  }
  const double at = alpha * m * nn;
  if (!(at < 1.0)) throw Error(ErrorCode::StepsizeOutOfRange, "requires alpha*m*n < 1");
  p1 = 1.0 / at;
  p2 = (1.0 - at) / (at * at);
  if (assumption == Assumption::ConvexSmooth) {
    mult = {0.0, (1.0 - at) * m * nn / (at * L)};
    prov = "sdca/cvx: p1=1/at, p2=(1-at)/at^2, lambda1=0, lambda2=(1-at)mn/(at L), at=alpha m n";
  } else {
    mult = {(1.0 - at) * m * nn / (at * L), 0.5};
    prov = "sdca/smooth: p1=1/at, p2=(1-at)/at^2, lambda1=(1-at)mn/(at L), lambda2=1/2, at=alpha m n";
  }
  c.method = MethodId::SDCA;
  c.assumption = assumption;
  c.m = m;
  c.L = L;
  c.n = n;
  c.alpha = alpha;
  c.rho2 = 1.0 - m * alpha;
  // The LMI is tight at 1 - m alpha; keep the stored rate from rounding below it.
  if (std::fma(m, alpha, c.rho2 - 1.0) < 0.0) c.rho2 = std::nextafter(c.rho2, 2.0);
  c.P = StructuredP::sdca(p1, p2);
  c.mult = mult;
  c.provenance = prov;
  c.lyapunov_weights = {{"|x - x*|^2", 1.0}, {"sum_i |y_i + grad f_i(x*)|^2", p1 / (p2 * m * m * nn * nn)}};
  if (assumption == Assumption::SmoothOnly) {
    AssumptionProfile convex = AssumptionProfile::make(MethodId::SDCA, Assumption::ConvexSmooth, m, L);
    bool ok = evaluate_bundle(reduced_lmi_sdca(convex, n, alpha, m, p1, p2, mult, c.rho2)).feasible;
    c.notes.push_back(std::string("verified with gamma=L; the same point with gamma=0 ") +
                      (ok ? "also verifies" : "fails"));
  }
  return finish(c);
}

LmiBundle certificate_bundle(const RateCertificate& c) {
  return reduced_lmi(c.profile(), c.n, c.alpha, c.P, c.mult, c.rho2);
}

VerificationReport verify_certificate(const RateCertificate& c, double tol) {
  VerificationReport rep;
  rep.P_positive = c.P.positive(c.n);
  rep.reduced = evaluate_bundle(certificate_bundle(c), tol);
  rep.feasible = rep.P_positive && rep.reduced.feasible;
  if (c.method == MethodId::Finito) {
    try {
      rep.relaxed = evaluate_bundle(finito_relaxed(c.profile(), c.n, c.alpha, c.P[0], c.P[3], c.mult, c.rho2), tol);
      rep.feasible = rep.feasible && rep.relaxed->feasible;
    } catch (const Error& e) {
      rep.detail = e.what();
      rep.feasible = false;
    }
  }
  if (!(c.rho2 >= 0.0 && c.rho2 <= 1.0)) rep.feasible = false;
  if (rep.detail.empty() && !rep.feasible) {
    std::ostringstream os;
    if (!rep.P_positive) os << "P is not positive definite; ";
    if (!rep.reduced.nsd_ok) os << "reduced NSD block eigenvalue " << rep.reduced.worst_scaled << " (scaled) > " << tol << "; ";
    if (!rep.reduced.pd_ok) os << "a reduced PD block is not positive; ";
    if (!rep.reduced.nonneg_ok) os << "a multiplier is negative; ";
    if (rep.relaxed && !rep.relaxed->feasible) os << "relaxed scalar conditions fail (worst " << rep.relaxed->worst_scaled << "); ";
    if (!(c.rho2 >= 0.0 && c.rho2 <= 1.0)) os << "rho2 outside [0, 1]; ";
    rep.detail = os.str();
    if (rep.detail.size() >= 2) rep.detail.resize(rep.detail.size() - 2);
  }
  return rep;
}

FullCheck verify_certificate_full(const RateCertificate& c, double tol) {
  JumpRealization r = build_realization(c.method, c.n, c.alpha, c.m);
  SymMatrix M = full_lmi(r, c.profile(), c.rho2, c.P.to_matrix(c.n), c.mult);
  FullCheck out;
  out.dim = M.dim();
  double fro = M.frobenius_norm();
  out.max_scaled = fro > 0.0 ? max_eigenvalue(M) / fro : 0.0;
  out.feasible = out.max_scaled <= tol && c.P.positive(c.n) && c.mult.lambda1 >= 0.0 && c.mult.lambda2 >= 0.0;
  return out;
}

std::optional<long long> iteration_complexity(double rho2, double eps) {
  if (!(rho2 < 1.0)) return std::nullopt;
  if (rho2 <= 0.0) return 0;
  return static_cast<long long>(std::ceil(std::log(1.0 / eps) / (-std::log(rho2))));
}

double default_stepsize(MethodId method, Assumption assumption, double m, double L, std::size_t n) {
  require_common(m, L, n);
  const double nn = dn(n);
  switch (method) {
    case MethodId::SAGA: return assumption == Assumption::SmoothOnly ? m / (4.0 * L * L) : 1.0 / (3.0 * L);
    case MethodId::SAG: return 1.0 / (16.0 * L);
    case MethodId::Finito: return finito_stepsize(assumption, m, L, n);
    case MethodId::SDCA:
      if (assumption == Assumption::SmoothOnly) return m / (L * L + m * m * nn);
      return 1.0 / (L + m * nn);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method");
}

}  // namespace jumplmi
