#include "jumplmi/rate_search.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "jumplmi/error.hpp"
#include "jumplmi/jump_models.hpp"

namespace jumplmi {

namespace {

double dn(std::size_t n) { return static_cast<double>(n); }
double sq(double v) { return v * v; }
double safe_exp(double v) { return std::exp(std::clamp(v, -60.0, 60.0)); }
double safe_log(double v) { return std::log(std::max(v, 1e-300)); }

SearchSpace effective_space(const SearchProblem& prob) {
  if (prob.method == MethodId::SAG && prob.space == SearchSpace::Reduced) return SearchSpace::FullBlockDiagonal;
  return prob.space;
}

// Maps unconstrained search vectors to (P, lambda) with P positive by construction.
class Codec {
 public:
  Codec(MethodId method, SearchSpace space, std::size_t n) : method_(method), space_(space), n_(n) {}

  std::size_t dim() const {
    if (space_ == SearchSpace::FullPermutationInvariant) return 6;
    return method_ == MethodId::Finito ? 7 : 4;
  }

  void decode(const double* x, StructuredP& P, MultiplierPair& mult) const {
    const double nn = dn(n_);
    if (space_ == SearchSpace::FullPermutationInvariant) {
      double p1 = safe_exp(x[0]);
      double a = safe_exp(x[1]), c = x[2], d = safe_exp(x[3]);
      P = StructuredP::sag_invariant(p1, c * c + d * d, (a * a - p1) / nn, a * c / std::sqrt(nn));
      mult = {sq(x[4]), sq(x[5])};
      return;
    }
    switch (method_) {
      case MethodId::SAGA:
      case MethodId::SAG:
        P = method_ == MethodId::SAGA ? StructuredP::saga(safe_exp(x[0]), safe_exp(x[1]))
                                      : StructuredP::sag(safe_exp(x[0]), safe_exp(x[1]));
        mult = {sq(x[2]), sq(x[3])};
        return;
      case MethodId::SDCA: {
        double p1 = safe_exp(x[0]);
        double s = safe_exp(x[1]);
        P = StructuredP::sdca(p1, (s - p1) / nn);
        mult = {sq(x[2]), sq(x[3])};
        return;
      }
      case MethodId::Finito: {
        double p1 = safe_exp(x[0]), p4 = safe_exp(x[1]);
        double a = safe_exp(x[2]), c = x[3], d = safe_exp(x[4]);
        P = StructuredP::finito(p1, (a * a - p1) / nn, a * c / nn, p4, (c * c + d * d - p4) / nn);
        mult = {sq(x[5]), sq(x[6])};
        return;
      }
    }
  }

  std::optional<std::vector<double>> encode(const StructuredP& P, MultiplierPair mult) const {
    const double nn = dn(n_);
    if (mult.lambda1 < 0.0 || mult.lambda2 < 0.0) return std::nullopt;
    const double l1 = std::sqrt(mult.lambda1), l2 = std::sqrt(mult.lambda2);
    if (space_ == SearchSpace::FullPermutationInvariant) {
      if (P.method != MethodId::SAG) return std::nullopt;
      double p1 = P[0], p2, p3, p4;
      if (P.form == StructuredP::Form::BlockDiagonal) {
        p2 = P[1];
        p3 = 0.0;
        p4 = 0.0;
      } else {
        p2 = P[1];
        p3 = P[2];
        p4 = P[3];
      }
      double a2 = p1 + nn * p3;
      if (!(p1 > 0.0) || !(a2 > 0.0)) return std::nullopt;
      double a = std::sqrt(a2);
      double c = std::sqrt(nn) * p4 / a;
      double d2 = p2 - c * c;
      if (!(d2 > 0.0)) return std::nullopt;
      return std::vector<double>{safe_log(p1), safe_log(a), c, safe_log(std::sqrt(d2)), l1, l2};
    }
    if (P.method != method_) return std::nullopt;
    switch (method_) {
      case MethodId::SAGA:
      case MethodId::SAG:
        if (!(P[0] > 0.0 && P[1] > 0.0)) return std::nullopt;
        return std::vector<double>{safe_log(P[0]), safe_log(P[1]), l1, l2};
      case MethodId::SDCA: {
        double s = P[0] + nn * P[1];
        if (!(P[0] > 0.0 && s > 0.0)) return std::nullopt;
        return std::vector<double>{safe_log(P[0]), safe_log(s), l1, l2};
      }
      case MethodId::Finito: {
        double a2 = P[0] + nn * P[1];
        if (!(P[0] > 0.0 && P[3] > 0.0 && a2 > 0.0)) return std::nullopt;
        double a = std::sqrt(a2);
        double c = nn * P[2] / a;
        double d2 = P[3] + nn * P[4] - c * c;
        if (!(d2 > 0.0)) return std::nullopt;
        return std::vector<double>{safe_log(P[0]), safe_log(P[3]), safe_log(a), c, safe_log(std::sqrt(d2)), l1, l2};
      }
    }
    return std::nullopt;
  }

 private:
  MethodId method_;
  SearchSpace space_;
  std::size_t n_;
};

// A heuristic (P, lambda) at the natural scale of the problem, used to center random starts.
std::pair<StructuredP, MultiplierPair> natural_point(const SearchProblem& prob, SearchSpace space) {
  const double nn = dn(prob.n), L = prob.L, m = prob.m, al = prob.alpha;
  if (space == SearchSpace::FullPermutationInvariant)
    return {StructuredP::sag_invariant(1.0 / L, 1.0 / al, 0.0, 0.0), {0.5 / L, 1.0 / L}};
  switch (prob.method) {
    case MethodId::SAGA: return {StructuredP::saga(1.0 / L, 1.0 / al), {0.5 / L, 1.0 / L}};
    case MethodId::SAG: return {StructuredP::sag(1.0 / L, 1.0 / al), {0.5 / L, 1.0 / L}};
    case MethodId::SDCA: {
      double at = std::min(al * m * nn, 0.9);
      double p1 = 1.0 / at;
      return {StructuredP::sdca(p1, (1.0 - at) / (at * at)), {0.5 * m * nn / (at * L), 0.5}};
    }
    case MethodId::Finito:
      return {finito_relaxed_slice(prob.n, al, al / L, 0.5 * m * al), {al / (2.0 * L), al / L}};
  }
  return {StructuredP::saga(1.0, 1.0), {1.0, 1.0}};
}

class Objective {
 public:
  Objective(const SearchProblem& prob, double rho2) : prob_(prob), rho2_(rho2), space_(effective_space(prob)) {
    profile_ = AssumptionProfile::make(prob.method, prob.assumption, prob.m, prob.L);
    if (space_ != SearchSpace::Reduced) build_basis();
  }

  double operator()(const StructuredP& P, MultiplierPair mult) const {
    if (!P.positive(prob_.n) || mult.lambda1 < 0.0 || mult.lambda2 < 0.0) return 1.0;
    double v;
    if (space_ == SearchSpace::Reduced) {
      LmiBundle b = reduced_lmi(profile_, prob_.n, prob_.alpha, P, mult, rho2_);
      for (const auto& blk : b.nsd_blocks)
        if (!blk.all_finite()) return 1.0;
      BundleReport rep = evaluate_bundle(b, 0.0);
      if (!rep.pd_ok) return 1.0;
      v = rep.worst_scaled;
    } else {
      std::vector<double> theta = P.p;
      theta.push_back(mult.lambda1);
      theta.push_back(mult.lambda2);
      Matrix acc(basis_[0].rows(), basis_[0].cols());
      for (std::size_t k = 0; k < basis_.size(); ++k) {
        if (theta[k] == 0.0) continue;
        acc += theta[k] * basis_[k];
      }
      SymMatrix M(acc);
      if (!M.all_finite()) return 1.0;
      double fro = M.frobenius_norm();
      v = fro > 0.0 ? max_eigenvalue(M) / fro : 0.0;
    }
    return std::isfinite(v) ? v : 1.0;
  }

  double raw(const StructuredP& P, MultiplierPair mult) const {
    if (space_ == SearchSpace::Reduced) {
      auto rep = evaluate_bundle(reduced_lmi(profile_, prob_.n, prob_.alpha, P, mult, rho2_), 0.0);
      double worst = -std::numeric_limits<double>::infinity();
      for (double r : rep.nsd_max_raw) worst = std::max(worst, r);
      return worst;
    }
    JumpRealization r = build_realization(prob_.method, prob_.n, prob_.alpha, prob_.m);
    return max_eigenvalue(full_lmi(r, profile_, rho2_, P.to_matrix(prob_.n), mult));
  }

 private:
  void build_basis() {
    JumpRealization r = build_realization(prob_.method, prob_.n, prob_.alpha, prob_.m);
    std::size_t count = space_ == SearchSpace::FullPermutationInvariant ? 4 : 2;
    for (std::size_t k = 0; k < count; ++k) {
      std::vector<double> unit(count, 0.0);
      unit[k] = 1.0;
      StructuredP P;
      P.method = prob_.method;
      P.form = space_ == SearchSpace::FullPermutationInvariant ? StructuredP::Form::PermutationInvariant
                                                              : StructuredP::Form::BlockDiagonal;
      P.p = unit;
      basis_.push_back(full_lmi(r, profile_, rho2_, P.to_matrix(prob_.n), {0.0, 0.0}).matrix());
    }
    basis_.push_back(multiplier_term(r, profile_, {1.0, 0.0}).matrix());
    basis_.push_back(multiplier_term(r, profile_, {0.0, 1.0}).matrix());
  }

  SearchProblem prob_;
  double rho2_;
  SearchSpace space_;
  AssumptionProfile profile_;
  std::vector<Matrix> basis_;
};

struct NmState {
  const std::function<double(const double*)>* f = nullptr;
  int evals = 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
};

double gsl_trampoline(const gsl_vector* v, void* params) {
  auto* st = static_cast<NmState*>(params);
  ++st->evals;
  double val = (*st->f)(v->data);
  if (val < st->best) {
    st->best = val;
    st->best_x.assign(v->data, v->data + v->size);
  }
  return val;
}

// Nelder-Mead (GSL nmsimplex2) with local re-expansion around the best point until the budget is spent.
void nelder_mead(const std::function<double(const double*)>& f, std::vector<double> x0, int max_evals, double target,
                 NmState& st) {
  const std::size_t d = x0.size();
  st.f = &f;
  gsl_multimin_function fn;
  fn.n = d;
  fn.f = &gsl_trampoline;
  fn.params = &st;
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, d);
  gsl_vector* x = gsl_vector_alloc(d);
  gsl_vector* step = gsl_vector_alloc(d);
  double step_size = 1.0;
  double last_best = std::numeric_limits<double>::infinity();
  while (st.evals < max_evals) {
    for (std::size_t k = 0; k < d; ++k) {
      gsl_vector_set(x, k, x0[k]);
      gsl_vector_set(step, k, step_size * std::max(1.0, 0.25 * std::abs(x0[k])));
    }
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    while (st.evals < max_evals && st.best > target) {
      if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
      if (gsl_multimin_fminimizer_size(s) < 1e-11) break;
    }
    if (st.best <= target) break;
    if (!(st.best < last_best - 1e-13)) break;
    last_best = st.best;
    x0 = st.best_x;
    step_size = 0.5;
  }
  gsl_vector_free(step);
  gsl_vector_free(x);
  gsl_multimin_fminimizer_free(s);
}

Witness normalized(StructuredP P, MultiplierPair mult, double rho2, double objective, std::string source) {
  double scale = 0.0;
  for (double v : P.p) scale = std::max(scale, std::abs(v));
  if (scale > 0.0) {
    for (double& v : P.p) v /= scale;
    mult.lambda1 /= scale;
    mult.lambda2 /= scale;
  }
  return {std::move(P), mult, rho2, objective, std::move(source)};
}

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

double search_objective(const SearchProblem& prob, double rho2, const StructuredP& P, MultiplierPair mult) {
  return Objective(prob, rho2)(P, mult);
}

std::vector<RateCertificate> analytical_certificates(const SearchProblem& prob) {
  std::vector<RateCertificate> out;
  auto add = [&](const RateCertificate& c) {
    if (c.verified) out.push_back(c);
    for (const auto& alt : c.alternatives)
      if (alt.verified) out.push_back(alt);
  };
  try {
    switch (prob.method) {
      case MethodId::SAGA: {
        try {
          add(saga_certificate(prob.assumption, prob.m, prob.L, prob.n, prob.alpha));
        } catch (const Error&) {
        }
        const double mnL = prob.m * dn(prob.n) + prob.L;
        if ((prob.assumption == Assumption::StronglyConvex && same_value(prob.alpha, 1.0 / (2.0 * mnL))) ||
            (prob.assumption == Assumption::ConvexSmooth && same_value(prob.alpha, 1.0 / (3.0 * mnL))))
          add(saga_mn_step_certificate(prob.assumption, prob.m, prob.L, prob.n));
        break;
      }
      case MethodId::Finito:
        if (same_value(prob.alpha, finito_stepsize(prob.assumption, prob.m, prob.L, prob.n)))
          add(finito_certificate(prob.assumption, prob.m, prob.L, prob.n));
        break;
      case MethodId::SDCA: add(sdca_certificate(prob.assumption, prob.m, prob.L, prob.n, prob.alpha)); break;
      case MethodId::SAG: break;
    }
  } catch (const Error&) {
  }
  return out;
}

FeasibilityResult feasible_at(const SearchProblem& prob, double rho2, const SearchConfig& cfg,
                              const std::vector<Witness>& seeds) {
  if (!(rho2 >= 0.0 && rho2 <= 1.0)) throw Error(ErrorCode::InvalidArgument, "rho2 must lie in [0, 1]");
  const SearchSpace space = effective_space(prob);
  Objective obj(prob, rho2);
  Codec codec(prob.method, space, prob.n);
  const std::size_t d = codec.dim();

  std::function<double(const double*)> f = [&](const double* x) {
    StructuredP P;
    MultiplierPair mult;
    codec.decode(x, P, mult);
    return obj(P, mult);
  };

  FeasibilityResult res;
  res.best_objective = std::numeric_limits<double>::infinity();

  auto run = [&](const std::vector<double>& x0, int index, bool seeded) -> bool {
    NmState st;
    nelder_mead(f, x0, cfg.max_evals, cfg.feas_tol, st);
    res.evals += st.evals;
    RestartDiagnostic diag;
    diag.restart = index;
    diag.seeded = seeded;
    diag.evals = st.evals;
    diag.best_scaled = st.best;
    StructuredP P;
    MultiplierPair mult;
    codec.decode(st.best_x.data(), P, mult);
    diag.best_raw = obj.raw(P, mult);
    res.restarts.push_back(diag);
    res.best_objective = std::min(res.best_objective, st.best);
    if (st.best <= cfg.feas_tol) {
      Witness w = normalized(P, mult, rho2, st.best, seeded ? "seeded" : "random-restart");
      // Re-verify the normalized witness through the bundle evaluation.
      if (obj(w.P, w.mult) <= cfg.feas_tol) {
        res.witness = w;
        return true;
      }
    }
    return false;
  };

  int index = 0;
  for (const auto& s : seeds) {
    auto x0 = codec.encode(s.P, s.mult);
    if (!x0) continue;
    if (run(*x0, index++, true)) return res;
  }

  auto [P0, m0] = natural_point(prob, space);
  std::vector<double> center = codec.encode(P0, m0).value_or(std::vector<double>(d, 0.0));
  for (int r = 0; r < cfg.restarts; ++r) {
    std::seed_seq sseq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu), static_cast<std::uint32_t>(cfg.seed >> 32),
                       static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(sseq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x0 = center;
    for (double& v : x0) v += (r == 0 ? 0.0 : 1.5) * normal(rng) * std::max(1.0, 0.5 * std::abs(v));
    if (run(x0, index++, false)) return res;
  }
  return res;
}

SearchResult bisect_rate(const SearchProblem& prob, const SearchConfig& cfg) {
  SearchResult out;
  auto certs = analytical_certificates(prob);
  std::vector<Witness> seeds;
  for (const auto& c : certs) {
    seeds.push_back({c.P, c.mult, c.rho2, 0.0, c.provenance});
    if (!out.analytical_rho2 || c.rho2 < *out.analytical_rho2) out.analytical_rho2 = c.rho2;
  }

  FeasibilityResult top = feasible_at(prob, 1.0, cfg, seeds);
  out.evals += top.evals;
  out.last_restarts = top.restarts;
  if (!top.witness) {
    out.status = "no-witness-at-rho2=1";
    return out;
  }
  double hi = 1.0;
  Witness best = *top.witness;

  for (const auto& s : seeds) {
    if (s.rho2 >= hi) continue;
    FeasibilityResult r = feasible_at(prob, s.rho2, cfg, {s});
    out.evals += r.evals;
    if (r.witness) {
      hi = s.rho2;
      best = *r.witness;
    }
  }

  double lo = 0.0;
  const double guess = std::max(0.0, 1.0 - 4.0 / dn(prob.n));
  if (guess > 0.0 && guess < hi) {
    FeasibilityResult r = feasible_at(prob, guess, cfg, {best});
    out.evals += r.evals;
    if (r.witness) {
      hi = guess;
      best = *r.witness;
    } else {
      lo = guess;
    }
  }

  while (hi - lo > cfg.rho2_tol) {
    double mid = 0.5 * (lo + hi);
    FeasibilityResult r = feasible_at(prob, mid, cfg, {best});
    out.evals += r.evals;
    ++out.bisection_steps;
    out.last_restarts = r.restarts;
    if (r.witness) {
      hi = mid;
      best = *r.witness;
    } else {
      lo = mid;
    }
  }
  out.rho2_best = hi;
  out.witness = best;
  out.status = "witness-found";
  return out;
}

double sag_published_rate(double m, double L, std::size_t n) { return 1.0 - std::min(m / (16.0 * L), 1.0 / (8.0 * dn(n))); }
double sag_published_stepsize(double L) { return 1.0 / (16.0 * L); }

SagProbeResult sag_probe(double m, double L, std::size_t n, double alpha, const std::vector<double>& rho2_grid,
                         const SearchConfig& cfg, Assumption assumption) {
  SagProbeResult out;
  out.assumption = assumption;
  out.m = m;
  out.L = L;
  out.n = n;
  out.alpha = alpha;
  out.published_rho2 = sag_published_rate(m, L, n);
  std::vector<double> grid = rho2_grid;
  std::sort(grid.begin(), grid.end(), std::greater<double>());

  SearchProblem bd{MethodId::SAG, assumption, m, L, n, alpha, SearchSpace::FullBlockDiagonal};
  SearchProblem inv = bd;
  inv.space = SearchSpace::FullPermutationInvariant;
  std::vector<Witness> bd_seed, inv_seed;
  bool bd_lost = false, inv_lost = false;
  for (double r : grid) {
    SagProbeRow row;
    row.rho2 = r;
    auto a = feasible_at(bd, r, cfg, bd_seed);
    row.block_diagonal_witness = a.witness.has_value();
    row.block_diagonal_best = a.witness ? a.witness->objective : a.best_objective;
    if (a.witness) bd_seed = {*a.witness};
    auto b = feasible_at(inv, r, cfg, inv_seed);
    row.invariant_witness = b.witness.has_value();
    row.invariant_best = b.witness ? b.witness->objective : b.best_objective;
    if (b.witness) inv_seed = {*b.witness};
    if (bd_lost && row.block_diagonal_witness) out.block_diagonal_monotone = false;
    if (inv_lost && row.invariant_witness) out.invariant_monotone = false;
    bd_lost = bd_lost || !row.block_diagonal_witness;
    inv_lost = inv_lost || !row.invariant_witness;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace jumplmi
