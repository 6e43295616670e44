#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include <jumplmi/error.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"

using namespace jumplmi::cli;

namespace {

void add_problem_flags(CLI::App* app, CertifyArgs& a, bool method_required = true) {
  auto* opt = app->add_option("--method", a.method, "saga | sag | finito | sdca");
  if (method_required) opt->required();
  app->add_option("--assumption", a.assumption, "sc | cvx | smooth")->capture_default_str();
  app->add_option("--m", a.m, "strong convexity constant of the average")->required();
  app->add_option("--L", a.L, "smoothness constant")->capture_default_str();
  app->add_option("--n", a.n, "number of components")->required();
  app->add_option("--alpha", a.alpha, "stepsize (defaults per method and assumption)");
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("JUMPLMI_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed JUMPLMI_SEED\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jump-system LMI rate certificates for SAGA, SAG, Finito and SDCA"};
  app.set_version_flag("--version", "0.1.0");
  app.require_subcommand(1);

  CommonArgs common;
  common.seed = default_seed();
  for (int i = 0; i < argc; ++i) common.argv.emplace_back(argv[i]);
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "random seed (default: JUMPLMI_SEED or 0)");

  CertifyArgs certify;
  auto* c_certify = app.add_subcommand("certify", "construct and verify an analytical rate certificate");
  add_problem_flags(c_certify, certify);
  c_certify->add_option("--b", certify.b, "free parameter of the saga cvx/smooth certificates");
  c_certify->add_option("--statement", certify.statement, "main | mn-step (saga stepsize tied to m n + L)")
      ->capture_default_str();

  BisectArgs bisect;
  auto* c_bisect = app.add_subcommand("bisect", "smallest certifiable rho2 by bisection over LMI feasibility");
  add_problem_flags(c_bisect, bisect.problem);
  c_bisect->add_option("--space", bisect.space, "reduced | block-diagonal | invariant")->capture_default_str();
  c_bisect->add_option("--restarts", bisect.restarts)->capture_default_str();
  c_bisect->add_option("--max-evals", bisect.max_evals)->capture_default_str();
  c_bisect->add_option("--rho2-tol", bisect.rho2_tol)->capture_default_str();

  SimulateArgs simulate;
  auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo trajectories against the certified envelope");
  c_sim->add_option("--method", simulate.problem.method);
  c_sim->add_option("--assumption", simulate.problem.assumption)->capture_default_str();
  c_sim->add_option("--m", simulate.problem.m);
  c_sim->add_option("--L", simulate.problem.L)->capture_default_str();
  c_sim->add_option("--n", simulate.problem.n);
  c_sim->add_option("--alpha", simulate.problem.alpha);
  c_sim->add_option("--certificate", simulate.certificate, "certificate.json to simulate instead of flags");
  c_sim->add_option("--p", simulate.p, "ambient dimension")->capture_default_str();
  c_sim->add_option("--trials", simulate.trials)->capture_default_str();
  c_sim->add_option("--iters", simulate.iters)->capture_default_str();
  c_sim->add_option("--table-init", simulate.table_init, "zero | grad")->capture_default_str();

  VerifyArgs verify;
  auto* c_verify = app.add_subcommand("verify", "re-check a certificate file (reduced LMI, full LMI, contraction)");
  c_verify->add_option("--certificate", verify.certificate)->required();
  c_verify->add_option("--tol", verify.tol)->capture_default_str();
  c_verify->add_option("--states", verify.states, "states for the one-step contraction check")
      ->capture_default_str();
  c_verify->add_option("--p", verify.p, "ambient dimension for the contraction check")->capture_default_str();

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "certify or bisect over a JSON grid, CSV output");
  c_sweep->add_option("--grid", sweep.grid, "grid JSON file")->required();
  c_sweep->add_option("--restarts", sweep.restarts)->capture_default_str();
  c_sweep->add_option("--max-evals", sweep.max_evals)->capture_default_str();

  SagProbeArgs probe;
  auto* c_probe = app.add_subcommand("sag-probe", "LMI feasibility of SAG near its published rate");
  c_probe->add_option("--m", probe.m)->capture_default_str();
  c_probe->add_option("--L", probe.L)->capture_default_str();
  c_probe->add_option("--n", probe.n)->capture_default_str();
  c_probe->add_option("--alpha", probe.alpha, "default 1/(16L)");
  c_probe->add_option("--assumption", probe.assumption)->capture_default_str();
  c_probe->add_option("--grid", probe.grid, "rho2 values (default 1, 0.999, 0.995, published)")->delimiter(',');
  c_probe->add_option("--restarts", probe.restarts)->capture_default_str();
  c_probe->add_option("--max-evals", probe.max_evals)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : InputError;
  }
  common.out = out;
  if (seed) common.seed = *seed;

  try {
    if (c_certify->parsed()) return cmd_certify(certify, common);
    if (c_bisect->parsed()) return cmd_bisect(bisect, common);
    if (c_sim->parsed()) {
      if (!simulate.certificate && (simulate.problem.method.empty() || simulate.problem.n == 0))
        throw jumplmi::Error(jumplmi::ErrorCode::InvalidArgument, "simulate needs --certificate or --method/--m/--n");
      return cmd_simulate(simulate, common);
    }
    if (c_verify->parsed()) return cmd_verify(verify, common);
    if (c_sweep->parsed()) return cmd_sweep(sweep, common);
    if (c_probe->parsed()) return cmd_sag_probe(probe, common);
  } catch (const jumplmi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == jumplmi::ErrorCode::Unsupported ? Unsupported : InputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return InputError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return InputError;
  }
  return InputError;
}
