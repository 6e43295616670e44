#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace jumplmi::cli {

enum ExitCode : int { Ok = 0, InputError = 2, Unsupported = 3, VerificationFailed = 4 };

struct CertifyArgs {
  std::string method;
  std::string assumption = "sc";
  double m = 0.0;
  double L = 1.0;
  std::size_t n = 0;
  std::optional<double> alpha;
  std::optional<double> b;
  std::string statement = "main";
};

struct CommonArgs {
  std::filesystem::path out = ".";
  std::uint64_t seed = 0;
  std::vector<std::string> argv;
};

int cmd_certify(const CertifyArgs& a, const CommonArgs& c);

struct BisectArgs {
  CertifyArgs problem;
  std::string space = "reduced";
  int restarts = 16;
  int max_evals = 2000;
  double rho2_tol = 1e-6;
};
int cmd_bisect(const BisectArgs& a, const CommonArgs& c);

struct SimulateArgs {
  CertifyArgs problem;
  std::optional<std::filesystem::path> certificate;
  std::size_t p = 5;
  std::size_t trials = 200;
  std::size_t iters = 300;
  std::string table_init = "zero";
};
int cmd_simulate(const SimulateArgs& a, const CommonArgs& c);

struct VerifyArgs {
  std::filesystem::path certificate;
  double tol = 1e-8;
  std::size_t states = 200;
  std::size_t p = 2;
};
int cmd_verify(const VerifyArgs& a, const CommonArgs& c);

struct SweepArgs {
  std::filesystem::path grid;
  int restarts = 8;
  int max_evals = 2000;
};
int cmd_sweep(const SweepArgs& a, const CommonArgs& c);

struct SagProbeArgs {
  double m = 0.1;
  double L = 1.0;
  std::size_t n = 10;
  std::optional<double> alpha;
  std::string assumption = "cvx";
  std::vector<double> grid;
  int restarts = 16;
  int max_evals = 2000;
};
int cmd_sag_probe(const SagProbeArgs& a, const CommonArgs& c);

}  // namespace jumplmi::cli
