#include "jumplmi/jump_models.hpp"

#include <algorithm>
#include <cmath>

#include "jumplmi/error.hpp"

namespace jumplmi {

void QuadraticFiniteSum::gradient(std::size_t component, const double* x, double* out) const {
  const double* d = D.data() + component * p;
  const double* bb = b.data() + component * p;
  for (std::size_t k = 0; k < p; ++k) out[k] = d[k] * x[k] + bb[k];
}

Vector QuadraticFiniteSum::gradient(std::size_t component, const Vector& x) const {
  if (component >= n) throw Error(ErrorCode::InvalidArgument, "component index out of range");
  if (x.size() != p) throw Error(ErrorCode::DimensionMismatch, "gradient point has wrong dimension");
  Vector g(p);
  gradient(component, x.data(), g.data());
  return g;
}

Vector QuadraticFiniteSum::average_hessian() const {
  Vector avg(p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < p; ++k) avg[k] += D[i * p + k];
  for (double& v : avg) v /= static_cast<double>(n);
  return avg;
}

Vector QuadraticFiniteSum::minimizer() const {
  Vector h = average_hessian();
  Vector bbar(p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < p; ++k) bbar[k] += b[i * p + k];
  Vector x(p);
  for (std::size_t k = 0; k < p; ++k) {
    double curv = h[k] + regularizer;
    if (!(curv > 0.0)) throw Error(ErrorCode::NoUniqueMinimizer, "average Hessian is not positive definite");
    x[k] = -(bbar[k] / static_cast<double>(n)) / curv;
  }
  return x;
}

Matrix SparseMatrix::dense() const {
  Matrix d(rows, cols);
  for (const auto& t : entries) d(t.row, t.col) += t.value;
  return d;
}

void lift_apply_add(const SparseMatrix& s, const Vector& x, std::size_t p, Vector& y) {
  for (const auto& t : s.entries) {
    const double* src = x.data() + t.col * p;
    double* dst = y.data() + t.row * p;
    for (std::size_t k = 0; k < p; ++k) dst[k] += t.value * src[k];
  }
}

Vector lift_apply(const Matrix& m, const Vector& x, std::size_t p) {
  if (x.size() != m.cols() * p) throw Error(ErrorCode::DimensionMismatch, "lifted product");
  Vector y(m.rows() * p, 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double v = m(r, c);
      if (v == 0.0) continue;
      for (std::size_t k = 0; k < p; ++k) y[r * p + k] += v * x[c * p + k];
    }
  return y;
}

JumpRealization::JumpRealization(MethodId method, std::size_t n, double alpha, std::optional<double> m)
    : method_(method), n_(n), alpha_(alpha), m_(m) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "n must be >= 2");
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  if (method == MethodId::SDCA) {
    if (!m || !(*m > 0.0)) throw Error(ErrorCode::MissingRegularizer, "SDCA needs a positive regularizer m");
  }
}

JumpRealization build_realization(MethodId method, std::size_t n, double alpha, std::optional<double> m) {
  return JumpRealization(method, n, alpha, method == MethodId::SDCA ? m : std::nullopt);
}

std::size_t JumpRealization::state_dim() const {
  switch (method_) {
    case MethodId::SAGA:
    case MethodId::SAG: return n_ + 1;
    case MethodId::Finito: return 2 * n_;
    case MethodId::SDCA: return n_;
  }
  return 0;
}

double JumpRealization::alpha_tilde() const {
  if (!m_) throw Error(ErrorCode::MissingRegularizer, "alpha_tilde needs m");
  return alpha_ * *m_ * static_cast<double>(n_);
}

void JumpRealization::check_index(std::size_t i) const {
  if (i < 1 || i > n_) throw Error(ErrorCode::InvalidArgument, "component index must be in 1..n");
}

SparseMatrix JumpRealization::A_sparse(std::size_t i) const {
  check_index(i);
  const std::size_t n = n_;
  const std::size_t ii = i - 1;
  const double nn = static_cast<double>(n);
  SparseMatrix a{state_dim(), state_dim(), {}};
  switch (method_) {
    case MethodId::SAGA:
    case MethodId::SAG: {
      for (std::size_t j = 0; j < n; ++j)
        if (j != ii) a.entries.push_back({j, j, 1.0});
      for (std::size_t j = 0; j < n; ++j) {
        double v;
        if (method_ == MethodId::SAGA)
          v = -(alpha_ / nn) * (1.0 - (j == ii ? nn : 0.0));
        else
          v = -(alpha_ / nn) * (j == ii ? 0.0 : 1.0);
        if (v != 0.0) a.entries.push_back({n, j, v});
      }
      a.entries.push_back({n, n, 1.0});
      break;
    }
    case MethodId::Finito: {
      for (std::size_t j = 0; j < n; ++j)
        if (j != ii) a.entries.push_back({j, j, 1.0});
      for (std::size_t j = 0; j < n; ++j) a.entries.push_back({n + ii, j, -alpha_});
      for (std::size_t j = 0; j < n; ++j) {
        if (j == ii)
          a.entries.push_back({n + ii, n + j, 1.0 / nn});
        else {
          a.entries.push_back({n + j, n + j, 1.0});
          a.entries.push_back({n + ii, n + j, 1.0 / nn});
        }
      }
      break;
    }
    case MethodId::SDCA: {
      double at = alpha_tilde();
      for (std::size_t j = 0; j < n; ++j) a.entries.push_back({j, j, j == ii ? 1.0 - at : 1.0});
      break;
    }
  }
  return a;
}

SparseMatrix JumpRealization::B_sparse(std::size_t i) const {
  check_index(i);
  const std::size_t ii = i - 1;
  const double nn = static_cast<double>(n_);
  SparseMatrix b{state_dim(), n_, {}};
  switch (method_) {
    case MethodId::SAGA:
      b.entries.push_back({ii, ii, 1.0});
      b.entries.push_back({n_, ii, -alpha_});
      break;
    case MethodId::SAG:
      b.entries.push_back({ii, ii, 1.0});
      b.entries.push_back({n_, ii, -alpha_ / nn});
      break;
    case MethodId::Finito:
      b.entries.push_back({ii, ii, 1.0});
      break;
    case MethodId::SDCA:
      b.entries.push_back({ii, ii, -alpha_tilde()});
      break;
  }
  return b;
}

Vector JumpRealization::C_row() const {
  const std::size_t n = n_;
  const double nn = static_cast<double>(n);
  Vector c(state_dim(), 0.0);
  switch (method_) {
    case MethodId::SAGA:
    case MethodId::SAG: c[n] = 1.0; break;
    case MethodId::Finito:
      for (std::size_t j = 0; j < n; ++j) {
        c[j] = -alpha_;
        c[n + j] = 1.0 / nn;
      }
      break;
    case MethodId::SDCA:
      for (std::size_t j = 0; j < n; ++j) c[j] = 1.0 / (*m_ * nn);
      break;
  }
  return c;
}

Vector stacked_gradients(const QuadraticFiniteSum& problem, const Vector& v) {
  if (v.size() != problem.p) throw Error(ErrorCode::DimensionMismatch, "gradient point has wrong dimension");
  Vector w(problem.n * problem.p);
  for (std::size_t j = 0; j < problem.n; ++j) problem.gradient(j, v.data(), w.data() + j * problem.p);
  return w;
}

EquilibriumData equilibrium(MethodId method, const QuadraticFiniteSum& problem) {
  if (method == MethodId::SDCA && !(problem.regularizer > 0.0))
    throw Error(ErrorCode::MissingRegularizer, "SDCA equilibrium needs the l2 regularizer");
  QuadraticFiniteSum q = problem;
  if (method != MethodId::SDCA) q.regularizer = 0.0;
  EquilibriumData eq;
  eq.p = problem.p;
  eq.xstar = q.minimizer();
  eq.wstar = stacked_gradients(problem, eq.xstar);
  const std::size_t n = problem.n, p = problem.p;
  switch (method) {
    case MethodId::SAGA:
    case MethodId::SAG:
      eq.xistar = eq.wstar;
      eq.xistar.insert(eq.xistar.end(), eq.xstar.begin(), eq.xstar.end());
      break;
    case MethodId::Finito:
      eq.xistar = eq.wstar;
      for (std::size_t i = 0; i < n; ++i) eq.xistar.insert(eq.xistar.end(), eq.xstar.begin(), eq.xstar.end());
      break;
    case MethodId::SDCA:
      eq.xistar.resize(n * p);
      for (std::size_t k = 0; k < n * p; ++k) eq.xistar[k] = -eq.wstar[k];
      break;
  }
  return eq;
}

double verify_fixed_point(const JumpRealization& r, const EquilibriumData& eq, std::size_t p) {
  if (eq.xistar.size() != r.state_dim() * p || eq.wstar.size() != r.n() * p || eq.xstar.size() != p)
    throw Error(ErrorCode::DimensionMismatch, "equilibrium does not match realization");
  double worst = 0.0;
  for (std::size_t i = 1; i <= r.n(); ++i) {
    Vector next(eq.xistar.size(), 0.0);
    lift_apply_add(r.A_sparse(i), eq.xistar, p, next);
    lift_apply_add(r.B_sparse(i), eq.wstar, p, next);
    for (std::size_t k = 0; k < next.size(); ++k) worst = std::max(worst, std::abs(next[k] - eq.xistar[k]));
  }
  Vector v = lift_apply(r.C(), eq.xistar, p);
  for (std::size_t k = 0; k < p; ++k) worst = std::max(worst, std::abs(v[k] - eq.xstar[k]));
  return worst;
}

Vector step_exact(const JumpRealization& r, const Vector& state, const QuadraticFiniteSum& problem, std::size_t i) {
  const std::size_t p = problem.p;
  if (problem.n != r.n()) throw Error(ErrorCode::DimensionMismatch, "problem and realization disagree on n");
  if (state.size() != r.state_dim() * p) throw Error(ErrorCode::DimensionMismatch, "state has wrong dimension");
  Vector v = lift_apply(r.C(), state, p);
  Vector w = stacked_gradients(problem, v);
  Vector next(state.size(), 0.0);
  lift_apply_add(r.A_sparse(i), state, p, next);
  lift_apply_add(r.B_sparse(i), w, p, next);
  return next;
}

}  // namespace jumplmi
