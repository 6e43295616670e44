// Acceptance driver: one PASS/FAIL line per criterion, non-zero exit if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jumplmi/certificates.hpp"
#include "jumplmi/error.hpp"
#include "jumplmi/lmi.hpp"
#include "jumplmi/rate_search.hpp"
#include "jumplmi/simulation.hpp"

using namespace jumplmi;

namespace {

const std::vector<double> kRatios = {1e-3, 1e-2, 0.1, 0.5, 1.0};
const std::vector<std::size_t> kSizes = {4, 10, 50, 200};
constexpr double kL = 1.0;

struct Cell {
  std::string statement;
  RateCertificate cert;
};

// Every certificate statement evaluated at one grid point. Cells whose preconditions fail are counted separately.
std::vector<Cell> grid_cells(double m, std::size_t n, int& skipped) {
  std::vector<Cell> out;
  auto attempt = [&](const std::string& name, const std::function<RateCertificate()>& make) {
    try {
      out.push_back({name, make()});
    } catch (const Error&) {
      ++skipped;
    }
  };
  for (Assumption a : {Assumption::StronglyConvex, Assumption::ConvexSmooth, Assumption::SmoothOnly}) {
    attempt("saga/" + to_string(a),
            [&] { return saga_certificate(a, m, kL, n, default_stepsize(MethodId::SAGA, a, m, kL, n)); });
    if (a != Assumption::SmoothOnly)
      attempt("saga-mn-step/" + to_string(a), [&] { return saga_mn_step_certificate(a, m, kL, n); });
    attempt("finito/" + to_string(a), [&] { return finito_certificate(a, m, kL, n); });
    if (a != Assumption::StronglyConvex)
      attempt("sdca/" + to_string(a),
              [&] { return sdca_certificate(a, m, kL, n, default_stepsize(MethodId::SDCA, a, m, kL, n)); });
  }
  return out;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion_grid() {
  int cells = 0, verified = 0, skipped = 0;
  double worst = -1e300;
  std::string first_fail;
  for (double m : kRatios)
    for (std::size_t n : kSizes)
      for (const auto& c : grid_cells(m, n, skipped)) {
        ++cells;
        auto rep = verify_certificate(c.cert, 1e-8);
        worst = std::max(worst, rep.reduced.worst_scaled);
        if (rep.feasible)
          ++verified;
        else if (first_fail.empty()) {
          std::ostringstream os;
          os << c.statement << " m=" << m << " n=" << n << ": " << rep.detail;
          first_fail = os.str();
        }
      }
  std::ostringstream os;
  os << verified << "/" << cells << " certificates verify (" << skipped
     << " cells outside preconditions), worst scaled eigenvalue " << worst;
  if (!first_fail.empty()) os << "; first failure " << first_fail;
  return {verified == cells && cells > 0, os.str()};
}

// A random parameter point near a certified one, so both verdicts occur.
RateCertificate random_draw(MethodId method, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double m = std::exp(std::log(0.01) + u(rng) * std::log(50.0));
  RateCertificate c;
  c.method = method;
  c.m = m;
  c.L = kL;
  c.n = n;
  switch (method) {
    case MethodId::SAGA: {
      c.assumption = u(rng) < 0.5 ? Assumption::StronglyConvex : Assumption::ConvexSmooth;
      c.alpha = (0.05 + 0.45 * u(rng)) / kL;
      RateCertificate base = saga_certificate(c.assumption, m, kL, n, c.alpha);
      c.P = base.P;
      c.mult = base.mult;
      c.rho2 = base.rho2;
      break;
    }
    case MethodId::Finito: {
      c.assumption = Assumption::StronglyConvex;
      c.alpha = finito_stepsize(c.assumption, m, kL, n) * (0.5 + u(rng));
      c.P = finito_relaxed_slice(n, c.alpha, c.alpha / kL, 0.5 * m * c.alpha);
      c.mult = {0.0, c.alpha / kL};
      c.rho2 = 1.0 - std::min(1.0 / (2.0 * n), m / (20.0 * kL));
      break;
    }
    case MethodId::SDCA: {
      c.assumption = u(rng) < 0.5 ? Assumption::ConvexSmooth : Assumption::SmoothOnly;
      c.alpha = default_stepsize(MethodId::SDCA, c.assumption, m, kL, n) * (0.2 + 0.8 * u(rng));
      RateCertificate base = sdca_certificate(c.assumption, m, kL, n, c.alpha);
      c.P = base.P;
      c.mult = base.mult;
      c.rho2 = base.rho2;
      break;
    }
    case MethodId::SAG: break;
  }
  for (double& v : c.P.p) v *= std::exp(0.3 * nd(rng));
  c.mult.lambda1 = std::abs(c.mult.lambda1 * std::exp(0.3 * nd(rng)) + 0.01 * c.mult.lambda2 * u(rng));
  c.mult.lambda2 *= std::exp(0.3 * nd(rng));
  c.rho2 = std::clamp(c.rho2 + 0.02 * (u(rng) - 0.5), 0.0, 1.0);
  return c;
}

Outcome criterion_equivalence() {
  std::mt19937_64 rng(2024);
  int total = 0, agree = 0, feasible = 0;
  std::string first;
  for (MethodId method : {MethodId::SAGA, MethodId::Finito, MethodId::SDCA}) {
    for (std::size_t n : {3u, 5u, 10u, 25u, 50u}) {
      for (int d = 0; d < 50; ++d) {
        RateCertificate c = random_draw(method, n, rng);
        auto prof = c.profile();
        bool reduced = evaluate_bundle(reduced_lmi(prof, n, c.alpha, c.P, c.mult, c.rho2), 1e-8).nsd_ok;
        auto r = build_realization(method, n, c.alpha, c.m);
        SymMatrix full = full_lmi(r, prof, c.rho2, c.P.to_matrix(n), c.mult);
        double fro = full.frobenius_norm();
        bool full_ok = (fro > 0.0 ? max_eigenvalue(full) / fro : 0.0) <= 1e-8;
        ++total;
        feasible += reduced;
        if (reduced == full_ok)
          ++agree;
        else if (first.empty())
          first = to_string(method) + " n=" + std::to_string(n) + " draw " + std::to_string(d);
      }
    }
  }
  std::ostringstream os;
  os << agree << "/" << total << " verdicts agree (" << feasible << " NSD, " << total - feasible << " not NSD)";
  if (!first.empty()) os << "; first disagreement " << first;
  return {agree == total, os.str()};
}

Outcome criterion_contraction() {
  int certs = 0, skipped = 0, fallback = 0;
  std::size_t states = 0, fewest = SIZE_MAX;
  double worst = -1e300;
  std::string worst_where;
  for (double m : kRatios) {
    for (std::size_t n : kSizes) {
      if (n > 20) continue;
      for (const auto& c : grid_cells(m, n, skipped)) {
        QuadraticFiniteSum q;
        try {
          q = generate_problem(c.cert.method, c.cert.assumption, m, kL, n, 3, 1000 + certs);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::InfeasibleClass) throw;
          // A strongly convex instance belongs to every weaker class.
          q = generate_problem(c.cert.method, Assumption::StronglyConvex, m, kL, n, 3, 1000 + certs);
          ++fallback;
        }
        auto sts = sample_states(c.cert.method, q, c.cert.alpha, 500, 7 + certs);
        auto rep = check_onestep_contraction(c.cert, q, sts);
        ++certs;
        states += rep.states;
        fewest = std::min(fewest, rep.states);
        if (rep.max_relative > worst) {
          worst = rep.max_relative;
          std::ostringstream w;
          w << c.statement << " m=" << m << " n=" << n;
          worst_where = w.str();
        }
      }
    }
  }
  std::ostringstream os;
  os << certs << " certificates, " << fewest << " states each (" << states << " total, p=3), worst relative violation "
     << worst << " at " << worst_where;
  if (fallback) os << "; " << fallback << " used a strongly convex instance";
  return {certs > 0 && fewest >= 500 && worst <= 1e-9, os.str()};
}

Outcome criterion_reference() {
  auto saga = saga_certificate(Assumption::StronglyConvex, 0.1, 1.0, 100, 1.0 / 3.0);
  auto sdca = sdca_certificate(Assumption::ConvexSmooth, 0.1, 1.0, 50, 1.0 / (1.0 + 0.1 * 50));
  auto finito = finito_certificate(Assumption::StronglyConvex, 0.01, 1.0, 71);
  const double tol = 4.0 * std::numeric_limits<double>::epsilon();
  bool ok = std::abs(saga.rho2 - 0.995) <= tol && std::abs(sdca.rho2 - (1.0 - 1.0 / 60.0)) <= tol &&
            std::abs(finito.rho2 - 0.9995) <= tol && std::abs(finito.alpha - 0.2) <= tol && saga.verified &&
            sdca.verified && finito.verified;
  char buf[256];
  std::snprintf(buf, sizeof buf, "SAGA %.17g, SDCA %.17g (1-1/60 = %.17g), Finito %.17g; all verified: %s", saga.rho2,
                sdca.rho2, 1.0 - 1.0 / 60.0, finito.rho2,
                saga.verified && sdca.verified && finito.verified ? "yes" : "no");
  return {ok, buf};
}

Outcome criterion_envelope() {
  const double m = 0.5;
  const std::size_t n = 20, p = 5;
  struct Run {
    std::string name;
    MethodId method;
    Assumption cls;
    StructuredP P;
    double alpha;
    double rho2;
  };
  std::vector<Run> runs;
  auto saga = saga_certificate(Assumption::StronglyConvex, m, kL, n, 1.0 / 3.0);
  runs.push_back({"SAGA", MethodId::SAGA, Assumption::StronglyConvex, saga.P, saga.alpha, saga.rho2});
  auto fin = finito_certificate(Assumption::StronglyConvex, m, kL, n);
  runs.push_back({"Finito", MethodId::Finito, Assumption::StronglyConvex, fin.P, fin.alpha, fin.rho2});
  auto sdca = sdca_certificate(Assumption::ConvexSmooth, m, kL, n, 1.0 / (kL + m * n));
  runs.push_back({"SDCA", MethodId::SDCA, Assumption::ConvexSmooth, sdca.P, sdca.alpha, sdca.rho2});

  // SAG has no closed-form certificate; use a searched witness when one exists at its published rate.
  std::string sag_note;
  {
    SearchProblem prob{MethodId::SAG, Assumption::ConvexSmooth, m, kL, n, sag_published_stepsize(kL),
                       SearchSpace::FullPermutationInvariant};
    double rho2 = sag_published_rate(m, kL, n);
    auto r = feasible_at(prob, rho2, SearchConfig{});
    if (r.witness)
      runs.push_back({"SAG", MethodId::SAG, Assumption::ConvexSmooth, r.witness->P, prob.alpha, rho2});
    else
      sag_note = "; SAG skipped (no certified rate)";
  }

  bool all_ok = true;
  std::ostringstream os;
  for (const auto& run : runs) {
    auto q = generate_problem(run.method, run.cls, m, kL, n, p, 314);
    SimulationConfig cfg;
    cfg.iters = 300;
    cfg.trials = 200;
    cfg.seed = 2718;
    auto tr = run_method(run.method, q, run.alpha, run.P, run.rho2, cfg);
    auto er = empirical_rate(tr);
    all_ok = all_ok && er.envelope_ok;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s%s rho2=%.6g fitted=%.6g max ratio=%.4f %s", os.tellp() > 0 ? "; " : "",
                  run.name.c_str(), run.rho2, er.fitted_rho2, er.max_ratio, er.envelope_ok ? "ok" : "violated");
    os << buf;
  }
  os << sag_note;
  return {all_ok, os.str()};
}

Outcome criterion_dominance() {
  SearchConfig cfg;
  cfg.restarts = 4;
  int cells = 0, dominated = 0, skipped = 0;
  double worst_gap = -1e300, mean_gain = 0.0;
  std::string first;
  for (double m : kRatios)
    for (std::size_t n : kSizes)
      for (const auto& c : grid_cells(m, n, skipped)) {
        SearchProblem prob{c.cert.method, c.cert.assumption, m, kL, n, c.cert.alpha, SearchSpace::Reduced};
        auto res = bisect_rate(prob, cfg);
        ++cells;
        double best = res.rho2_best.value_or(2.0);
        double gap = best - c.cert.rho2;
        worst_gap = std::max(worst_gap, gap);
        mean_gain += -gap;
        if (gap <= 1e-6)
          ++dominated;
        else if (first.empty()) {
          std::ostringstream w;
          w << c.statement << " m=" << m << " n=" << n << " (" << best << " vs " << c.cert.rho2 << ")";
          first = w.str();
        }
      }
  std::ostringstream os;
  os << dominated << "/" << cells << " cells with rho2_best <= certificate + 1e-6, largest excess " << worst_gap
     << ", mean improvement " << (cells ? mean_gain / cells : 0.0);
  if (!first.empty()) os << "; first failure " << first;
  return {dominated == cells && cells > 0, os.str()};
}

Outcome criterion_sag_probe(std::string& info) {
  const double m = 0.1;
  const std::size_t n = 10;
  const double rho2 = sag_published_rate(m, kL, n);
  auto res = sag_probe(m, kL, n, sag_published_stepsize(kL), {rho2}, SearchConfig{});
  const auto& row = res.rows.at(0);
  std::ostringstream os;
  os << "(one-sided) rho2=" << rho2 << ", block-diagonal P: "
     << (row.block_diagonal_witness ? "witness found" : "no witness") << ", best scaled eigenvalue "
     << row.block_diagonal_best;
  std::ostringstream inf;
  inf << "SAG with a permutation-invariant P (off-diagonal table/iterate coupling) at the same rho2: "
      << (row.invariant_witness ? "witness found" : "no witness") << ", objective " << row.invariant_best;
  info = inf.str();
  return {!row.block_diagonal_witness, os.str()};
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int id, const std::function<Outcome()>& f) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("criterion %d: %s - %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  };
  report(1, criterion_grid);
  report(2, criterion_equivalence);
  report(3, criterion_contraction);
  report(4, criterion_reference);
  report(5, criterion_envelope);
  report(6, criterion_dominance);
  std::string sag_info;
  report(7, [&] { return criterion_sag_probe(sag_info); });
  if (!sag_info.empty()) std::printf("info: %s\n", sag_info.c_str());
  std::printf("criterion 8: INFO - no large-scale experiments to reproduce; acceptance is certificate verification "
              "and property checks\n");
  return all ? 0 : 1;
}
