#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "jumplmi/certificates.hpp"
#include "jumplmi/function_classes.hpp"
#include "jumplmi/lmi.hpp"
#include "jumplmi/problem.hpp"

namespace jumplmi {

// Diagonal quadratic instance whose average spectrum spans [m, L] exactly.
// For SDCA the l2 weight m is kept outside the f_i (problem.regularizer = m).
QuadraticFiniteSum generate_problem(MethodId method, Assumption assumption, double m, double L, std::size_t n,
                                    std::size_t p, std::uint64_t seed);

// Efficient per-method updates with running sums; one individual gradient per step.
// The state uses the jump-system layout: SAGA/SAG [y; x], Finito [y; x_1..x_n], SDCA y.
class MethodRunner {
 public:
  MethodRunner(MethodId method, const QuadraticFiniteSum& problem, double alpha, const Vector& xi0);

  // i is 1-based.
  void step(std::size_t i);
  Vector state() const;
  // x for SAGA/SAG/SDCA, v = (1/n) sum x_i - alpha sum y_i for Finito.
  Vector iterate() const;
  // SDCA only: sum(y)/(mn), the non-recursive form of the iterate.
  Vector sdca_dual_iterate() const;
  long long gradient_evals() const { return grad_evals_; }

  const double* y(std::size_t i) const { return y_.data() + i * p_; }
  const double* xs(std::size_t i) const { return xs_.data() + i * p_; }
  const Vector& x() const { return x_; }
  const Vector& sum_y() const { return sy_; }
  const Vector& sum_x() const { return sx_; }

 private:
  MethodId method_;
  const QuadraticFiniteSum* problem_;
  double alpha_;
  std::size_t n_, p_;
  Vector x_, y_, xs_, sy_, sx_, g_, v_;
  long long grad_evals_ = 0;
};

enum class TableInit { Zero, GradientAtStart };

struct SimulationConfig {
  std::size_t iters = 300;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  TableInit table_init = TableInit::Zero;
};

struct SimulationTrace {
  MethodId method = MethodId::SAGA;
  double alpha = 0.0;
  double rho2 = 1.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double V0 = 0.0;
  double cond_P = 1.0;
  double xi_dist2_0 = 0.0;
  long long gradient_evals = 0;
  std::vector<std::size_t> k;
  std::vector<double> mean_V;
  std::vector<double> stderr_V;
  // rho2^k * V0
  std::vector<double> envelope;
  // rho2^k * cond(P) * |xi0 - xi*|^2, a bound on mean_xi_dist2
  std::vector<double> cond_envelope;
  std::vector<double> mean_dist2;
  std::vector<double> mean_xi_dist2;
};

// Independent trials from one shared starting point with |x0 - x*| = 1.
// The Lyapunov value uses the full (P kron I_p) quadratic form of the given structured P.
SimulationTrace run_method(MethodId method, const QuadraticFiniteSum& problem, double alpha, const StructuredP& P,
                           double rho2, const SimulationConfig& cfg);

// Index in 0..n-1 drawn from a counter-based generator keyed by (seed, trial, iteration).
std::size_t sample_index(std::uint64_t seed, std::uint64_t trial, std::uint64_t iteration, std::size_t n);

// Random jump-system states: perturbed equilibria advanced by a few random steps.
std::vector<Vector> sample_states(MethodId method, const QuadraticFiniteSum& problem, double alpha, std::size_t count,
                                  std::uint64_t seed);

struct ContractionReport {
  std::size_t states = 0;
  // max over states of E[V+] - rho2 V
  double max_violation = 0.0;
  // max over states of (E[V+] - rho2 V) / max(1, V)
  double max_relative = 0.0;
};

double lyapunov_value(const SymMatrix& P, const Vector& state, const Vector& xistar, std::size_t p);

ContractionReport check_onestep_contraction(const RateCertificate& cert, const QuadraticFiniteSum& problem,
                                            const std::vector<Vector>& states);

struct EmpiricalRate {
  double slope = 0.0;
  double fitted_rho2 = 1.0;
  bool envelope_ok = true;
  std::optional<std::size_t> first_violation;
  // max over k of mean_V / (envelope * (1 + 3 * relative stderr))
  double max_ratio = 0.0;
};

EmpiricalRate empirical_rate(const SimulationTrace& trace);

// Columns: k, mean_V, stderr_V, envelope, envelope_status (ok|violated), mean_dist2, cond_envelope, mean_xi_dist2
void write_trace_csv(const SimulationTrace& trace, std::ostream& out);

}  // namespace jumplmi
