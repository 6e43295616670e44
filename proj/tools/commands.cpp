#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <jumplmi/certificates.hpp>
#include <jumplmi/error.hpp>
#include <jumplmi/rate_search.hpp>
#include <jumplmi/serialize.hpp>
#include <jumplmi/simulation.hpp>

namespace jumplmi::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  f << text;
}

void write_json(const fs::path& path, json j) {
  j["manifest"] = "manifest.json";
  write_text(path, j.dump(2) + "\n");
}

void write_manifest(const CommonArgs& c, const std::string& command, const json& params,
                    const std::vector<std::string>& outputs) {
  json m{{"command", command},
         {"parameters", params},
         {"seed", c.seed},
         {"tool_version", kVersion},
         {"timestamp", utc_timestamp()},
         {"argv", c.argv},
         {"outputs", outputs}};
  write_text(c.out / "manifest.json", m.dump(2) + "\n");
}

json certify_params(const CertifyArgs& a) {
  json j{{"method", a.method}, {"assumption", a.assumption}, {"m", a.m}, {"L", a.L}, {"n", a.n},
         {"statement", a.statement}};
  j["alpha"] = a.alpha ? json(*a.alpha) : json(nullptr);
  j["b"] = a.b ? json(*a.b) : json(nullptr);
  return j;
}

RateCertificate make_certificate(const CertifyArgs& a) {
  MethodId method = parse_method(a.method);
  Assumption assumption = parse_assumption(a.assumption);
  if (method == MethodId::SAG)
    throw Error(ErrorCode::Unsupported, "no LMI certificate for SAG via this condition; see sag-probe");
  if (a.statement != "main" && a.statement != "mn-step")
    throw Error(ErrorCode::InvalidArgument, "statement must be main or mn-step");
  if (a.statement == "mn-step") {
    if (method != MethodId::SAGA) throw Error(ErrorCode::InvalidArgument, "mn-step applies to saga only");
    return saga_mn_step_certificate(assumption, a.m, a.L, a.n);
  }
  double alpha = a.alpha ? *a.alpha : default_stepsize(method, assumption, a.m, a.L, a.n);
  switch (method) {
    case MethodId::SAGA: return saga_certificate(assumption, a.m, a.L, a.n, alpha, a.b);
    case MethodId::Finito: {
      double fixed = finito_stepsize(assumption, a.m, a.L, a.n);
      if (std::abs(alpha - fixed) > 1e-12 * fixed) {
        std::ostringstream os;
        os << "finito certificates fix alpha = " << std::setprecision(12) << fixed;
        throw Error(ErrorCode::StepsizeOutOfRange, os.str());
      }
      return finito_certificate(assumption, a.m, a.L, a.n);
    }
    case MethodId::SDCA: return sdca_certificate(assumption, a.m, a.L, a.n, alpha);
    case MethodId::SAG: break;
  }
  throw Error(ErrorCode::Unsupported, "unsupported method");
}

std::string num(double v, int prec = 12) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

void row(const std::string& key, const std::string& value) {
  std::cout << std::left << std::setw(22) << key << value << "\n";
}

void print_certificate(const RateCertificate& c) {
  row("method", to_string(c.method));
  row("assumption", to_string(c.assumption));
  row("m, L, n", num(c.m) + ", " + num(c.L) + ", " + std::to_string(c.n));
  row("alpha", num(c.alpha));
  if (c.b) row("b", num(*c.b));
  row("rho2", num(c.rho2, 15));
  auto k = iteration_complexity(c.rho2);
  row("iterations to 1e-6", k ? std::to_string(*k) : "unbounded");
  row("point", c.provenance);
  row("verified", c.verified ? "yes" : "NO");
  if (c.reference_rho2) row("reference rho2", num(*c.reference_rho2, 15));
  for (const auto& alt : c.alternatives)
    row("alternative", "rho2=" + num(alt.rho2, 15) + (alt.verified ? " verified" : " NOT verified") + "  " +
                           alt.provenance);
  for (const auto& note : c.notes) row("note", note);
}

SearchSpace parse_space(const std::string& s) {
  if (s == "reduced") return SearchSpace::Reduced;
  if (s == "block-diagonal") return SearchSpace::FullBlockDiagonal;
  if (s == "invariant") return SearchSpace::FullPermutationInvariant;
  throw Error(ErrorCode::InvalidArgument, "space must be reduced, block-diagonal or invariant");
}

std::string csv_num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

int cmd_certify(const CertifyArgs& a, const CommonArgs& c) {
  RateCertificate cert = make_certificate(a);
  print_certificate(cert);
  write_json(c.out / "certificate.json", cert);
  write_manifest(c, "certify", certify_params(a), {"certificate.json"});
  return cert.verified ? Ok : VerificationFailed;
}

int cmd_bisect(const BisectArgs& a, const CommonArgs& c) {
  const auto& p = a.problem;
  SearchProblem prob;
  prob.method = parse_method(p.method);
  prob.assumption = parse_assumption(p.assumption);
  prob.m = p.m;
  prob.L = p.L;
  prob.n = p.n;
  if (!(p.m > 0.0) || !(p.L >= p.m)) throw Error(ErrorCode::InvalidArgument, "requires 0 < m <= L");
  if (prob.method == MethodId::SDCA && prob.assumption == Assumption::StronglyConvex)
    throw Error(ErrorCode::InvalidArgument, "SDCA supports cvx and smooth f_i");
  prob.alpha = p.alpha ? *p.alpha : default_stepsize(prob.method, prob.assumption, p.m, p.L, p.n);
  prob.space = parse_space(a.space);
  SearchConfig cfg;
  cfg.restarts = a.restarts;
  cfg.max_evals = a.max_evals;
  cfg.rho2_tol = a.rho2_tol;
  cfg.seed = c.seed;
  SearchResult r = bisect_rate(prob, cfg);
  row("method", to_string(prob.method));
  row("alpha", num(prob.alpha));
  row("status", r.status);
  row("rho2_best", r.rho2_best ? num(*r.rho2_best, 15) : "none");
  row("analytical rho2", r.analytical_rho2 ? num(*r.analytical_rho2, 15) : "none");
  row("bisection steps", std::to_string(r.bisection_steps));
  row("objective evals", std::to_string(r.evals));
  json params = certify_params(p);
  params["alpha"] = prob.alpha;
  params["space"] = a.space;
  params["restarts"] = a.restarts;
  params["max_evals"] = a.max_evals;
  params["rho2_tol"] = a.rho2_tol;
  json out = r;
  out["problem"] = params;
  write_json(c.out / "result.json", out);
  write_manifest(c, "bisect", params, {"result.json"});
  return Ok;
}

int cmd_simulate(const SimulateArgs& a, const CommonArgs& c) {
  RateCertificate cert;
  if (a.certificate) {
    std::ifstream f(*a.certificate);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot read " + a.certificate->string());
    cert = json::parse(f).get<RateCertificate>();
  } else {
    cert = make_certificate(a.problem);
  }
  if (cert.method == MethodId::SAG)
    throw Error(ErrorCode::Unsupported, "no LMI certificate for SAG via this condition; see sag-probe");
  QuadraticFiniteSum q = generate_problem(cert.method, cert.assumption, cert.m, cert.L, cert.n, a.p, c.seed);
  SimulationConfig cfg;
  cfg.iters = a.iters;
  cfg.trials = a.trials;
  cfg.seed = c.seed;
  if (a.table_init == "zero")
    cfg.table_init = TableInit::Zero;
  else if (a.table_init == "grad")
    cfg.table_init = TableInit::GradientAtStart;
  else
    throw Error(ErrorCode::InvalidArgument, "table-init must be zero or grad");
  SimulationTrace tr = run_method(cert.method, q, cert.alpha, cert.P, cert.rho2, cfg);
  std::ostringstream csv;
  write_trace_csv(tr, csv);
  write_text(c.out / "result.csv", csv.str());
  json summary = tr;
  std::optional<EmpiricalRate> er;
  if (tr.mean_V.size() > 50 && tr.trials >= 100) {
    er = empirical_rate(tr);
    summary["empirical"] = *er;
  } else {
    summary["empirical"] = nullptr;
  }
  bool ok = true;
  std::size_t violations = 0;
  for (std::size_t k = 0; k < tr.k.size(); ++k) {
    double mv = tr.mean_V[k];
    double rel = mv > 0.0 ? tr.stderr_V[k] / mv : 0.0;
    if (mv > tr.envelope[k] * (1.0 + 3.0 * rel)) {
      ok = false;
      ++violations;
    }
  }
  summary["envelope_ok"] = ok;
  summary["envelope_violations"] = violations;
  summary["certificate"] = cert;
  write_json(c.out / "summary.json", summary);
  json params{{"method", to_string(cert.method)}, {"assumption", to_string(cert.assumption)},
              {"m", cert.m}, {"L", cert.L}, {"n", cert.n}, {"alpha", cert.alpha}, {"rho2", cert.rho2},
              {"p", a.p}, {"trials", a.trials}, {"iters", a.iters}, {"table_init", a.table_init}};
  write_manifest(c, "simulate", params, {"result.csv", "summary.json"});
  row("method", to_string(cert.method));
  row("rho2 (certified)", num(cert.rho2, 15));
  if (er) row("fitted decay", num(er->fitted_rho2, 15));
  row("V0", num(tr.V0));
  row("envelope", ok ? "ok at every k" : std::to_string(violations) + " violations");
  return ok ? Ok : VerificationFailed;
}

int cmd_verify(const VerifyArgs& a, const CommonArgs& c) {
  std::ifstream f(a.certificate);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot read " + a.certificate.string());
  RateCertificate cert;
  try {
    cert = json::parse(f).get<RateCertificate>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed certificate: ") + e.what());
  }
  if (cert.method == MethodId::SAG)
    throw Error(ErrorCode::Unsupported, "no LMI certificate for SAG via this condition; see sag-probe");
  json out;
  bool ok = true;
  VerificationReport rep = verify_certificate(cert, a.tol);
  out["reduced"] = rep;
  ok = ok && rep.feasible;
  row("reduced LMI", rep.feasible ? "feasible" : "INFEASIBLE (" + rep.detail + ")");
  if (cert.n <= 300) {
    FullCheck full = verify_certificate_full(cert, a.tol);
    out["full"] = {{"feasible", full.feasible}, {"max_scaled", full.max_scaled}, {"dim", full.dim}};
    ok = ok && full.feasible;
    row("full LMI", (full.feasible ? "feasible" : "INFEASIBLE") + std::string(" (max scaled eig ") +
                        num(full.max_scaled, 6) + ")");
  } else {
    out["full"] = nullptr;
    row("full LMI", "skipped (n > 300)");
  }
  if (cert.n <= 50) {
    QuadraticFiniteSum q = generate_problem(cert.method, cert.assumption, cert.m, cert.L, cert.n, a.p, c.seed);
    auto states = sample_states(cert.method, q, cert.alpha, a.states, c.seed);
    ContractionReport cr = check_onestep_contraction(cert, q, states);
    bool cok = cr.max_relative <= 1e-9;
    out["contraction"] = cr;
    ok = ok && cok;
    row("one-step contraction", (cok ? "ok" : "VIOLATED") + std::string(" (max relative ") +
                                    num(cr.max_relative, 6) + ")");
  } else {
    out["contraction"] = nullptr;
    row("one-step contraction", "skipped (n > 50)");
  }
  out["verified"] = ok;
  write_json(c.out / "verification.json", out);
  json params{{"certificate", a.certificate.string()}, {"tol", a.tol}, {"states", a.states}, {"p", a.p}};
  write_manifest(c, "verify", params, {"verification.json"});
  row("verdict", ok ? "verified" : "FAILED");
  return ok ? Ok : VerificationFailed;
}

int cmd_sweep(const SweepArgs& a, const CommonArgs& c) {
  std::ifstream f(a.grid);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot read " + a.grid.string());
  json g;
  try {
    g = json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed grid: ") + e.what());
  }
  const std::string method_s = g.at("method").get<std::string>();
  const MethodId method = parse_method(method_s);
  const Assumption assumption = parse_assumption(g.value("assumption", std::string("sc")));
  const double L = g.value("L", 1.0);
  const auto ratios = g.at("m_over_L").get<std::vector<double>>();
  const auto ns = g.at("n").get<std::vector<std::size_t>>();
  const std::string mode = g.value("mode", std::string("certify"));
  if (mode != "certify" && mode != "bisect") throw Error(ErrorCode::InvalidArgument, "mode must be certify or bisect");
  if (mode == "certify" && method == MethodId::SAG)
    throw Error(ErrorCode::Unsupported, "no LMI certificate for SAG via this condition; see sag-probe");

  std::ostringstream csv;
  csv << "method,assumption,m,L,n,alpha,rho2_best,status\n";
  std::size_t rows = 0;
  for (double ratio : ratios) {
    for (std::size_t n : ns) {
      const double m = ratio * L;
      std::optional<double> alpha;
      if (g.contains("alpha") && !g["alpha"].is_null()) alpha = g["alpha"].get<double>();
      std::string status;
      std::optional<double> rho2;
      double used_alpha = std::nan("");
      try {
        used_alpha = alpha ? *alpha : default_stepsize(method, assumption, m, L, n);
        if (mode == "certify") {
          CertifyArgs ca{method_s, to_string(assumption), m, L, n, used_alpha, std::nullopt, "main"};
          RateCertificate cert = make_certificate(ca);
          rho2 = cert.rho2;
          status = cert.verified ? "verified" : "not-verified";
        } else {
          SearchProblem prob{method, assumption, m, L, n, used_alpha, SearchSpace::Reduced};
          SearchConfig cfg;
          cfg.restarts = a.restarts;
          cfg.max_evals = a.max_evals;
          cfg.seed = c.seed;
          SearchResult r = bisect_rate(prob, cfg);
          rho2 = r.rho2_best;
          status = r.status;
        }
      } catch (const Error& e) {
        status = std::string("precondition: ") + e.what();
      }
      std::string st = status;
      for (char& ch : st)
        if (ch == ',' || ch == '"' || ch == '\n') ch = ';';
      csv << to_string(method) << ',' << to_string(assumption) << ',' << csv_num(m) << ',' << csv_num(L) << ','
          << n << ',' << (std::isnan(used_alpha) ? std::string() : csv_num(used_alpha)) << ','
          << (rho2 ? csv_num(*rho2) : std::string()) << ',' << st << '\n';
      ++rows;
    }
  }
  write_text(c.out / "result.csv", csv.str());
  write_manifest(c, "sweep", g, {"result.csv"});
  row("rows", std::to_string(rows));
  row("output", (c.out / "result.csv").string());
  return Ok;
}

int cmd_sag_probe(const SagProbeArgs& a, const CommonArgs& c) {
  if (!(a.m > 0.0) || !(a.L >= a.m)) throw Error(ErrorCode::InvalidArgument, "requires 0 < m <= L");
  double alpha = a.alpha ? *a.alpha : sag_published_stepsize(a.L);
  std::vector<double> grid = a.grid;
  double published = sag_published_rate(a.m, a.L, a.n);
  if (grid.empty()) grid = {1.0, 0.999, 0.995, published};
  SearchConfig cfg;
  cfg.restarts = a.restarts;
  cfg.max_evals = a.max_evals;
  cfg.seed = c.seed;
  SagProbeResult r = sag_probe(a.m, a.L, a.n, alpha, grid, cfg, parse_assumption(a.assumption));
  std::cout << std::left << std::setw(14) << "rho2" << std::setw(26) << "block-diagonal P" << "invariant P\n";
  for (const auto& rw : r.rows) {
    std::cout << std::setw(14) << num(rw.rho2, 8)
              << std::setw(26) << ((rw.block_diagonal_witness ? "witness " : "none    ") + num(rw.block_diagonal_best, 4))
              << ((rw.invariant_witness ? "witness " : "none    ") + num(rw.invariant_best, 4)) << "\n";
  }
  row("published rho2", num(published, 15));
  row("monotone", (r.block_diagonal_monotone && r.invariant_monotone) ? "yes" : "no");
  json params{{"m", a.m}, {"L", a.L}, {"n", a.n}, {"alpha", alpha}, {"assumption", a.assumption},
              {"grid", grid}, {"restarts", a.restarts}, {"max_evals", a.max_evals}};
  write_json(c.out / "probe.json", r);
  write_manifest(c, "sag-probe", params, {"probe.json"});
  return Ok;
}

}  // namespace jumplmi::cli
