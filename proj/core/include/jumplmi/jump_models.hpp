#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "jumplmi/function_classes.hpp"
#include "jumplmi/linalg.hpp"
#include "jumplmi/problem.hpp"

namespace jumplmi {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Triplet> entries;

  Matrix dense() const;
};

// y += (S kron I_p) x
void lift_apply_add(const SparseMatrix& s, const Vector& x, std::size_t p, Vector& y);
// (M kron I_p) x
Vector lift_apply(const Matrix& m, const Vector& x, std::size_t p);

// Reduced (per-coordinate) jump-system matrices. Component indices are 1-based.
class JumpRealization {
 public:
  JumpRealization(MethodId method, std::size_t n, double alpha, std::optional<double> m);

  MethodId method() const { return method_; }
  std::size_t n() const { return n_; }
  double alpha() const { return alpha_; }
  std::optional<double> m() const { return m_; }
  std::size_t state_dim() const;
  std::size_t input_dim() const { return n_; }
  // alpha * m * n (SDCA only)
  double alpha_tilde() const;

  SparseMatrix A_sparse(std::size_t i) const;
  SparseMatrix B_sparse(std::size_t i) const;
  Matrix A(std::size_t i) const { return A_sparse(i).dense(); }
  Matrix B(std::size_t i) const { return B_sparse(i).dense(); }
  Vector C_row() const;
  Matrix C() const { return Matrix::row(C_row()); }

 private:
  void check_index(std::size_t i) const;

  MethodId method_;
  std::size_t n_;
  double alpha_;
  std::optional<double> m_;
};

JumpRealization build_realization(MethodId method, std::size_t n, double alpha, std::optional<double> m = std::nullopt);

struct EquilibriumData {
  std::size_t p = 0;
  Vector xstar;
  Vector wstar;
  Vector xistar;
};

EquilibriumData equilibrium(MethodId method, const QuadraticFiniteSum& problem);

double verify_fixed_point(const JumpRealization& r, const EquilibriumData& eq, std::size_t p);

// Stacked gradients w = [grad f_1(v); ...; grad f_n(v)].
Vector stacked_gradients(const QuadraticFiniteSum& problem, const Vector& v);

Vector step_exact(const JumpRealization& r, const Vector& state, const QuadraticFiniteSum& problem, std::size_t i);

}  // namespace jumplmi
