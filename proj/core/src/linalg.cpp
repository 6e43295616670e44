#include "jumplmi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jumplmi/error.hpp"

namespace jumplmi {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::size_t r = rows.size();
  std::size_t c = r ? rows.begin()->size() : 0;
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorCode::DimensionMismatch, "ragged row list");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix Matrix::column(const Vector& v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

Matrix Matrix::row(const Vector& v) {
  Matrix m(1, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(0, i) = v[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double s = 0.0;
  for (double v : data_) s = std::max(s, std::abs(v));
  return s;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

SymMatrix::SymMatrix(const Matrix& m) : m_(m.rows(), m.cols()) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "symmetric matrix must be square");
  if (m.rows() == 0) throw Error(ErrorCode::InvalidArgument, "symmetric matrix must have dim >= 1");
  std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = m(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.5 * (m(i, j) + m(j, i));
      m_(i, j) = v;
      m_(j, i) = v;
    }
  }
}

SymMatrix SymMatrix::zeros(std::size_t n) { return SymMatrix(Matrix(n, n)); }
SymMatrix SymMatrix::identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }

SymMatrix SymMatrix::diagonal(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return SymMatrix(m);
}

SymMatrix SymMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  return SymMatrix(Matrix::from_rows(rows));
}

double SymMatrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += m_(i, i);
  return s;
}

bool SymMatrix::all_finite() const {
  return std::all_of(m_.data().begin(), m_.data().end(), [](double v) { return std::isfinite(v); });
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.matrix() + b.matrix()); }
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.matrix() - b.matrix()); }
SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.matrix()); }

Vector ones(std::size_t n) { return Vector(n, 1.0); }

Vector basis_vector(std::size_t n, std::size_t i) {
  if (i >= n) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  Vector e(n, 0.0);
  e[i] = 1.0;
  return e;
}

Matrix outer(const Vector& a, const Vector& b) {
  Matrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vector eigenvalues_sym(const SymMatrix& m) {
  if (!m.all_finite()) throw Error(ErrorCode::InvalidMatrix, "non-finite entry");
  const std::size_t n = m.dim();
  std::vector<double> a = m.matrix().data();
  const double fro = m.frobenius_norm();
  const double threshold = 1e-14 * fro;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (std::sqrt(2.0 * off) <= threshold) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = at(p, q);
        if (apq == 0.0) continue;
        double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double tau = s / (1.0 + c);
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          double g = at(k, p);
          double h = at(k, q);
          double kp = g - s * (h + g * tau);
          double kq = h + s * (g - h * tau);
          at(k, p) = kp;
          at(p, k) = kp;
          at(k, q) = kq;
          at(q, k) = kq;
        }
      }
    }
  }

  Vector ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double max_eigenvalue(const SymMatrix& m) { return eigenvalues_sym(m).back(); }
double min_eigenvalue(const SymMatrix& m) { return eigenvalues_sym(m).front(); }

bool is_nsd(const SymMatrix& m, double tol) {
  if (tol < 0.0) throw Error(ErrorCode::InvalidArgument, "tolerance must be nonnegative");
  return max_eigenvalue(m) <= tol * std::max(1.0, m.frobenius_norm());
}

bool is_pd(const SymMatrix& m, double tol) {
  if (tol < 0.0) throw Error(ErrorCode::InvalidArgument, "tolerance must be nonnegative");
  double lo = min_eigenvalue(m);
  return lo > 0.0 && lo >= tol * std::max(1.0, m.frobenius_norm());
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) k(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
    }
  return k;
}

Matrix kron_identity(const Matrix& m, std::size_t p) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "lift dimension must be >= 1");
  return kron(m, Matrix::identity(p));
}

SymMatrix kron_identity(const SymMatrix& m, std::size_t p) { return SymMatrix(kron_identity(m.matrix(), p)); }

SymMatrix principal_submatrix(const SymMatrix& m, const std::vector<std::size_t>& idx) {
  Matrix s(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (idx[i] >= m.dim() || idx[j] >= m.dim()) throw Error(ErrorCode::InvalidArgument, "index out of range");
      s(i, j) = m(idx[i], idx[j]);
    }
  return SymMatrix(s);
}

namespace {

// Lower Cholesky factor of a positive definite matrix stored densely.
Matrix cholesky(const Matrix& a) {
  std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw Error(ErrorCode::SingularBlock, "pivot block is not negative definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// Solves (L L^T) x = b in place.
void cholesky_solve(const Matrix& l, Vector& b) {
  std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b[k];
    b[i] = s / l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
    b[i] = s / l(i, i);
  }
}

}  // namespace

SymMatrix schur_reduce(const SymMatrix& m, const std::vector<std::size_t>& block, double tol) {
  const std::size_t n = m.dim();
  std::vector<bool> in_block(n, false);
  for (std::size_t b : block) {
    if (b >= n) throw Error(ErrorCode::InvalidArgument, "pivot index out of range");
    if (in_block[b]) throw Error(ErrorCode::InvalidArgument, "duplicate pivot index");
    in_block[b] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i)
    if (!in_block[i]) rest.push_back(i);
  if (block.empty() || rest.empty()) throw Error(ErrorCode::InvalidArgument, "pivot block must be a proper nonempty subset");

  SymMatrix pivot = principal_submatrix(m, block);
  if (max_eigenvalue(pivot) > -tol)
    throw Error(ErrorCode::SingularBlock, "pivot block has an eigenvalue above -" + std::to_string(tol));

  Matrix neg(block.size(), block.size());
  for (std::size_t i = 0; i < block.size(); ++i)
    for (std::size_t j = 0; j < block.size(); ++j) neg(i, j) = -pivot(i, j);
  Matrix l = cholesky(neg);

  // M_rr - M_rb B^{-1} M_br = M_rr + M_rb (-B)^{-1} M_br
  std::vector<Vector> solved(rest.size());
  for (std::size_t c = 0; c < rest.size(); ++c) {
    Vector col(block.size());
    for (std::size_t i = 0; i < block.size(); ++i) col[i] = m(block[i], rest[c]);
    cholesky_solve(l, col);
    solved[c] = std::move(col);
  }
  Matrix out(rest.size(), rest.size());
  for (std::size_t r = 0; r < rest.size(); ++r)
    for (std::size_t c = 0; c < rest.size(); ++c) {
      double s = m(rest[r], rest[c]);
      for (std::size_t i = 0; i < block.size(); ++i) s += m(rest[r], block[i]) * solved[c][i];
      out(r, c) = s;
    }
  return SymMatrix(out);
}

}  // namespace jumplmi
