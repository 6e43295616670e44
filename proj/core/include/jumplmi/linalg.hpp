#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace jumplmi {

using Vector = std::vector<double>;

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix column(const Vector& v);
  static Matrix row(const Vector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<double>& data() const { return data_; }

  Matrix transpose() const;
  double frobenius_norm() const;
  double max_abs() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);

// Symmetric matrix; the input is symmetrized as (M + M^T) / 2 on construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix zeros(std::size_t n);
  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(const Vector& d);
  static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t dim() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const { return m_; }

  double frobenius_norm() const { return m_.frobenius_norm(); }
  double trace() const;
  bool all_finite() const;

 private:
  Matrix m_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double s, const SymMatrix& a);

Vector ones(std::size_t n);
Vector basis_vector(std::size_t n, std::size_t i);
Matrix outer(const Vector& a, const Vector& b);
double dot(const Vector& a, const Vector& b);

// Ascending eigenvalues via cyclic Jacobi rotations.
Vector eigenvalues_sym(const SymMatrix& m);
double max_eigenvalue(const SymMatrix& m);
double min_eigenvalue(const SymMatrix& m);

bool is_nsd(const SymMatrix& m, double tol = 1e-9);
bool is_pd(const SymMatrix& m, double tol = 0.0);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_identity(const Matrix& m, std::size_t p);
SymMatrix kron_identity(const SymMatrix& m, std::size_t p);

SymMatrix principal_submatrix(const SymMatrix& m, const std::vector<std::size_t>& idx);

// Schur complement of the (negative definite) pivot block indexed by `block`.
SymMatrix schur_reduce(const SymMatrix& m, const std::vector<std::size_t>& block, double tol = 1e-12);

}  // namespace jumplmi
