#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "jumplmi/error.hpp"
#include "jumplmi/linalg.hpp"
#include "jumplmi/lmi.hpp"

using namespace jumplmi;

namespace {

SymMatrix random_sym(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
  return SymMatrix(m);
}

Eigen::MatrixXd to_eigen(const SymMatrix& s) {
  Eigen::MatrixXd e(s.dim(), s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j) e(i, j) = s(i, j);
  return e;
}

// Orthonormal Q from Gram-Schmidt on a random matrix.
Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<Vector> cols;
  while (cols.size() < n) {
    Vector v(n);
    for (double& x : v) x = d(rng);
    for (const auto& c : cols) {
      double pr = dot(v, c);
      for (std::size_t k = 0; k < n; ++k) v[k] -= pr * c[k];
    }
    double nv = std::sqrt(dot(v, v));
    if (nv < 1e-8) continue;
    for (double& x : v) x /= nv;
    cols.push_back(v);
  }
  Matrix q(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) q(i, j) = cols[j][i];
  return q;
}

}  // namespace

TEST(SymMatrix, SymmetrizedOnConstruction) {
  SymMatrix s(Matrix::from_rows({{1.0, 2.0}, {4.0, 5.0}}));
  EXPECT_EQ(s(0, 1), s(1, 0));
  EXPECT_DOUBLE_EQ(s(0, 1), 3.0);
}

TEST(Eigenvalues, DiagonalSorted) {
  auto ev = eigenvalues_sym(SymMatrix::diagonal({3.0, 1.0, 2.0}));
  ASSERT_EQ(ev.size(), 3u);
  EXPECT_DOUBLE_EQ(ev[0], 1.0);
  EXPECT_DOUBLE_EQ(ev[1], 2.0);
  EXPECT_DOUBLE_EQ(ev[2], 3.0);
}

TEST(Eigenvalues, Swap2x2) {
  auto ev = eigenvalues_sym(SymMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
  EXPECT_NEAR(ev[0], -1.0, 1e-15);
  EXPECT_NEAR(ev[1], 1.0, 1e-15);
}

TEST(Eigenvalues, PlantedSpectrumRecovered) {
  std::mt19937_64 rng(11);
  Vector planted{-4.0, -1.5, 0.0, 0.25, 2.0, 7.0};
  Matrix q = random_orthogonal(6, rng);
  Matrix d(6, 6);
  for (std::size_t i = 0; i < 6; ++i) d(i, i) = planted[i];
  SymMatrix m(q.transpose() * d * q);
  auto ev = eigenvalues_sym(m);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(ev[i], planted[i], 1e-9);
}

TEST(Eigenvalues, MatchesEigenOnRandomMatrices) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {1u, 2u, 7u, 30u, 80u}) {
    SymMatrix m = random_sym(n, rng, 3.0);
    auto ev = eigenvalues_sym(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m));
    double radius = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ev[i], es.eigenvalues()(static_cast<Eigen::Index>(i)), 1e-10 * radius);
  }
}

TEST(Eigenvalues, SumEqualsTrace) {
  std::mt19937_64 rng(9);
  SymMatrix m = random_sym(25, rng);
  double s = 0.0;
  for (double v : eigenvalues_sym(m)) s += v;
  EXPECT_NEAR(s, m.trace(), 1e-9 * std::max(1.0, std::abs(m.trace())));
}

TEST(Eigenvalues, NonFiniteRejected) {
  SymMatrix m = SymMatrix::from_rows({{1.0, std::numeric_limits<double>::quiet_NaN()}, {0.0, 1.0}});
  try {
    eigenvalues_sym(m);
    FAIL() << "expected InvalidMatrix";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidMatrix);
  }
}

TEST(Predicates, NsdAndPd) {
  EXPECT_TRUE(is_nsd(SymMatrix::zeros(3), 1e-9));
  EXPECT_FALSE(is_nsd(SymMatrix::diagonal({1.0, -1.0}), 1e-9));
  EXPECT_TRUE(is_pd(SymMatrix::identity(4), 0.0));
  EXPECT_FALSE(is_pd(SymMatrix::zeros(2), 1e-12));
}

TEST(Predicates, FinitoSliceIsPositiveDefinite) {
  const std::size_t n = 5;
  const double alpha = 0.1;
  for (double p1 : {1e-3, 0.1, 2.0})
    for (double p4 : {1e-4, 0.5}) {
      StructuredP P = finito_relaxed_slice(n, alpha, p1, p4);
      EXPECT_TRUE(is_pd(P.to_matrix(n))) << p1 << " " << p4;
    }
}

TEST(Kron, IdentityLift) {
  std::mt19937_64 rng(3);
  SymMatrix m = random_sym(4, rng);
  SymMatrix k1 = kron_identity(m, 1);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(k1(i, j), m(i, j));
  SymMatrix k3 = kron_identity(SymMatrix::diagonal({2.5}), 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(k3(i, j), i == j ? 2.5 : 0.0);
}

TEST(Kron, EigenvaluesRepeatWithMultiplicity) {
  std::mt19937_64 rng(4);
  SymMatrix m = random_sym(4, rng);
  auto base = eigenvalues_sym(m);
  auto lifted = eigenvalues_sym(kron_identity(m, 3));
  ASSERT_EQ(lifted.size(), 12u);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(lifted[i], base[i / 3], 1e-12);
}

TEST(Kron, NsdInvariantUnderLift) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    SymMatrix m = random_sym(5, rng);
    // Shift so that roughly half the samples are NSD.
    double shift = max_eigenvalue(m) + (t % 2 == 0 ? 0.1 : -0.1);
    m = m - shift * SymMatrix::identity(5);
    for (std::size_t p : {1u, 2u, 3u}) EXPECT_EQ(is_nsd(m), is_nsd(kron_identity(m, p)));
  }
}

TEST(Schur, TwoByTwoFormula) {
  const double a = 1.0, b = 2.0, c = -4.0;
  SymMatrix m = SymMatrix::from_rows({{a, b}, {b, c}});
  SymMatrix s = schur_reduce(m, {1});
  ASSERT_EQ(s.dim(), 1u);
  EXPECT_NEAR(s(0, 0), a - b * b / c, 1e-14);
}

TEST(Schur, RejectsNonNegativePivot) {
  SymMatrix m = SymMatrix::from_rows({{1.0, 0.5}, {0.5, 0.0}});
  try {
    schur_reduce(m, {1});
    FAIL() << "expected SingularBlock";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularBlock);
  }
}

TEST(Schur, NsdThroughSchurMatchesDirect) {
  std::mt19937_64 rng(21);
  int agree = 0;
  for (int t = 0; t < 200; ++t) {
    SymMatrix m = random_sym(6, rng);
    SymMatrix piv = principal_submatrix(m, {3, 4, 5});
    double shift = max_eigenvalue(m) + (t % 3 == 0 ? 0.05 : -0.3);
    shift = std::max(shift, max_eigenvalue(piv) + 0.01);
    m = m - shift * SymMatrix::identity(6);
    bool direct = max_eigenvalue(m) <= 0.0;
    bool via = max_eigenvalue(principal_submatrix(m, {3, 4, 5})) < 0.0 && max_eigenvalue(schur_reduce(m, {3, 4, 5})) <= 0.0;
    EXPECT_EQ(direct, via);
    agree += direct == via;
  }
  EXPECT_EQ(agree, 200);
}
