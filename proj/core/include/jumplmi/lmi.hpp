#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jumplmi/function_classes.hpp"
#include "jumplmi/jump_models.hpp"
#include "jumplmi/linalg.hpp"

namespace jumplmi {

struct MultiplierPair {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

// Structured Lyapunov matrix parameters.
//   SAGA/SAG block diagonal: (p1, p2)            -> diag(p1 I_n, p2)
//   SAG permutation invariant: (p1, p2, p3, p4)  -> [[p1 I + p3 ee^T, p4 e], [p4 e^T, p2]]
//   SDCA: (p1, p2)                               -> p1 I + p2 ee^T
//   Finito: (p1, ..., p5)                        -> [[p1 I + p2 ee^T, p3 ee^T], [p3 ee^T, p4 I + p5 ee^T]]
struct StructuredP {
  enum class Form { BlockDiagonal, PermutationInvariant };

  MethodId method = MethodId::SAGA;
  Form form = Form::BlockDiagonal;
  std::vector<double> p;

  static StructuredP saga(double p1, double p2);
  static StructuredP sag(double p1, double p2);
  static StructuredP sag_invariant(double p1, double p2, double p3, double p4);
  static StructuredP sdca(double p1, double p2);
  static StructuredP finito(double p1, double p2, double p3, double p4, double p5);

  double operator[](std::size_t k) const { return p.at(k); }
  SymMatrix to_matrix(std::size_t n) const;
  // Positivity conditions on the parameters for the given n.
  bool positive(std::size_t n) const;
};

struct LmiBundle {
  std::string label;
  std::vector<SymMatrix> nsd_blocks;
  std::vector<SymMatrix> pd_blocks;
  std::vector<double> nonneg_scalars;
  nlohmann::json params = nlohmann::json::object();
};

struct BundleReport {
  bool feasible = false;
  bool nsd_ok = false;
  bool pd_ok = false;
  bool nonneg_ok = false;
  double scale = 0.0;
  double worst_scaled = 0.0;
  std::vector<double> nsd_max_raw;
  std::vector<double> nsd_max_scaled;
  std::vector<double> pd_min_raw;
};

// Every NSD block is divided by one common scale (the largest block Frobenius norm).
BundleReport evaluate_bundle(const LmiBundle& bundle, double tol = 1e-8);

// Left side of the full LMI, assembled by summation over the n jump modes.
SymMatrix full_lmi(const JumpRealization& r, const AssumptionProfile& a, double rho2, const SymMatrix& Pt,
                   MultiplierPair mult);

// Same matrix assembled from closed-form block expressions (SAGA, Finito, SDCA with structured P).
SymMatrix full_lmi_closed_form(const JumpRealization& r, const AssumptionProfile& a, double rho2, const StructuredP& P,
                               MultiplierPair mult);

// The multiplier contribution G^T W G alone.
SymMatrix multiplier_term(const JumpRealization& r, const AssumptionProfile& a, MultiplierPair mult);

LmiBundle reduced_lmi_saga(const AssumptionProfile& a, std::size_t n, double alpha, double p1, double p2,
                           MultiplierPair mult, double rho2);

enum class FinitoPdVariant { Corrected, PrintedText };

LmiBundle reduced_lmi_finito(const AssumptionProfile& a, std::size_t n, double alpha, const std::array<double, 5>& p,
                             MultiplierPair mult, double rho2, FinitoPdVariant variant = FinitoPdVariant::Corrected);

LmiBundle reduced_lmi_sdca(const AssumptionProfile& a, std::size_t n, double alpha, double m, double p1, double p2,
                           MultiplierPair mult, double rho2);

// Dispatches on P.method (SAGA, Finito, SDCA).
LmiBundle reduced_lmi(const AssumptionProfile& a, std::size_t n, double alpha, const StructuredP& P, MultiplierPair mult,
                      double rho2);

// Block structures of the form mu I_n + q ee^T.
//   Scalar:           mu1 I + q1 ee^T                                  (positivity)
//   TwoByTwo:         blocks (1,1)=1, (1,2)=3, (2,2)=2
//   ThreeByThreeSaga: n-blocks 1 and 3, scalar middle block mu2, couplings q4 e and q5 e, (1,3)=6
//   ThreeByThreeFull: (1,1)=1, (1,2)=4, (1,3)=6, (2,2)=2, (2,3)=5, (3,3)=3
// mu[k] and q[k] hold the coefficients with subscript k+1; unused slots are ignored.
enum class BlockShape { Scalar, TwoByTwo, ThreeByThreeSaga, ThreeByThreeFull };

LmiBundle block_reduce(const std::array<double, 6>& mu, const std::array<double, 6>& q, std::size_t n, BlockShape shape);
SymMatrix block_expand(const std::array<double, 6>& mu, const std::array<double, 6>& q, std::size_t n, BlockShape shape);

// Relaxed scalar Finito conditions on the slice p2 = alpha^2, p3 = -alpha/n, p5 = 1/n^2.
LmiBundle finito_relaxed(const AssumptionProfile& a, std::size_t n, double alpha, double p1, double p4,
                         MultiplierPair mult, double rho2);
StructuredP finito_relaxed_slice(std::size_t n, double alpha, double p1, double p4);

}  // namespace jumplmi
