#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jumplmi/certificates.hpp"
#include "jumplmi/function_classes.hpp"
#include "jumplmi/lmi.hpp"

namespace jumplmi {

struct SearchConfig {
  double rho2_tol = 1e-6;
  double feas_tol = 1e-9;
  int restarts = 16;
  int max_evals = 2000;
  std::uint64_t seed = 0;
};

// Reduced: small bundles (SAGA, Finito, SDCA).
// FullBlockDiagonal / FullPermutationInvariant: the full LMI with a structured P (used for SAG).
enum class SearchSpace { Reduced, FullBlockDiagonal, FullPermutationInvariant };

struct SearchProblem {
  MethodId method = MethodId::SAGA;
  Assumption assumption = Assumption::StronglyConvex;
  double m = 0.0;
  double L = 0.0;
  std::size_t n = 0;
  double alpha = 0.0;
  SearchSpace space = SearchSpace::Reduced;
};

struct Witness {
  StructuredP P;
  MultiplierPair mult;
  double rho2 = 1.0;
  double objective = 0.0;
  std::string source;
};

struct RestartDiagnostic {
  int restart = 0;
  bool seeded = false;
  int evals = 0;
  double best_scaled = 0.0;
  double best_raw = 0.0;
};

struct FeasibilityResult {
  std::optional<Witness> witness;
  int evals = 0;
  double best_objective = 0.0;
  std::vector<RestartDiagnostic> restarts;
};

struct SearchResult {
  std::optional<double> rho2_best;
  std::optional<Witness> witness;
  long long evals = 0;
  int bisection_steps = 0;
  std::optional<double> analytical_rho2;
  std::string status;
  std::vector<RestartDiagnostic> last_restarts;
};

// Objective used by the search: largest NSD eigenvalue after common scaling.
double search_objective(const SearchProblem& prob, double rho2, const StructuredP& P, MultiplierPair mult);

// Certificates that apply to the problem's (method, assumption, n, alpha).
std::vector<RateCertificate> analytical_certificates(const SearchProblem& prob);

FeasibilityResult feasible_at(const SearchProblem& prob, double rho2, const SearchConfig& cfg,
                              const std::vector<Witness>& seeds = {});

SearchResult bisect_rate(const SearchProblem& prob, const SearchConfig& cfg);

struct SagProbeRow {
  double rho2 = 1.0;
  bool block_diagonal_witness = false;
  double block_diagonal_best = 0.0;
  bool invariant_witness = false;
  double invariant_best = 0.0;
};

struct SagProbeResult {
  Assumption assumption = Assumption::ConvexSmooth;
  double m = 0.0;
  double L = 0.0;
  std::size_t n = 0;
  double alpha = 0.0;
  double published_rho2 = 1.0;
  std::vector<SagProbeRow> rows;
  bool block_diagonal_monotone = true;
  bool invariant_monotone = true;
};

// 1 - min{m/(16L), 1/(8n)}
double sag_published_rate(double m, double L, std::size_t n);
double sag_published_stepsize(double L);

// Defaults to convex f_i with strongly convex average, the class behind the published SAG rate.
SagProbeResult sag_probe(double m, double L, std::size_t n, double alpha, const std::vector<double>& rho2_grid,
                         const SearchConfig& cfg, Assumption assumption = Assumption::ConvexSmooth);

}  // namespace jumplmi
