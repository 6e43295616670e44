#include "jumplmi/lmi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jumplmi/error.hpp"

namespace jumplmi {

namespace {

double dn(std::size_t n) { return static_cast<double>(n); }

SymMatrix scalar_block(double v) { return SymMatrix::from_rows({{v}}); }

SymMatrix sym2(double a, double b, double c) { return SymMatrix::from_rows({{a, b}, {b, c}}); }

SymMatrix sym3(double a11, double a12, double a13, double a22, double a23, double a33) {
  return SymMatrix::from_rows({{a11, a12, a13}, {a12, a22, a23}, {a13, a23, a33}});
}

// Adds s * (mu I + q ee^T) into the n x n block starting at (r0, c0), and its mirror.
void add_block(Matrix& m, std::size_t r0, std::size_t c0, std::size_t n, double mu, double q) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double v = q + (i == j ? mu : 0.0);
      m(r0 + i, c0 + j) += v;
      if (r0 != c0) m(c0 + j, r0 + i) += v;
    }
}

void check_rho2(double rho2) {
  if (!(rho2 >= 0.0 && rho2 <= 1.0)) throw Error(ErrorCode::InvalidArgument, "rho2 must lie in [0, 1]");
}

nlohmann::json base_params(const AssumptionProfile& a, std::size_t n, double alpha, MultiplierPair mult, double rho2) {
  return {{"m", a.m}, {"L", a.L}, {"nu", a.nu}, {"gamma", a.gamma}, {"n", n}, {"alpha", alpha},
          {"lambda1", mult.lambda1}, {"lambda2", mult.lambda2}, {"rho2", rho2}};
}

}  // namespace

StructuredP StructuredP::saga(double p1, double p2) { return {MethodId::SAGA, Form::BlockDiagonal, {p1, p2}}; }
StructuredP StructuredP::sag(double p1, double p2) { return {MethodId::SAG, Form::BlockDiagonal, {p1, p2}}; }
StructuredP StructuredP::sag_invariant(double p1, double p2, double p3, double p4) {
  return {MethodId::SAG, Form::PermutationInvariant, {p1, p2, p3, p4}};
}
StructuredP StructuredP::sdca(double p1, double p2) { return {MethodId::SDCA, Form::BlockDiagonal, {p1, p2}}; }
StructuredP StructuredP::finito(double p1, double p2, double p3, double p4, double p5) {
  return {MethodId::Finito, Form::PermutationInvariant, {p1, p2, p3, p4, p5}};
}

SymMatrix StructuredP::to_matrix(std::size_t n) const {
  switch (method) {
    case MethodId::SAGA:
    case MethodId::SAG: {
      Matrix m(n + 1, n + 1);
      if (form == Form::BlockDiagonal) {
        for (std::size_t i = 0; i < n; ++i) m(i, i) = p.at(0);
        m(n, n) = p.at(1);
      } else {
        add_block(m, 0, 0, n, p.at(0), p.at(2));
        for (std::size_t i = 0; i < n; ++i) {
          m(i, n) = p.at(3);
          m(n, i) = p.at(3);
        }
        m(n, n) = p.at(1);
      }
      return SymMatrix(m);
    }
    case MethodId::SDCA: {
      Matrix m(n, n);
      add_block(m, 0, 0, n, p.at(0), p.at(1));
      return SymMatrix(m);
    }
    case MethodId::Finito: {
      Matrix m(2 * n, 2 * n);
      add_block(m, 0, 0, n, p.at(0), p.at(1));
      add_block(m, 0, n, n, 0.0, p.at(2));
      add_block(m, n, n, n, p.at(3), p.at(4));
      return SymMatrix(m);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method");
}

bool StructuredP::positive(std::size_t n) const {
  const double nn = dn(n);
  switch (method) {
    case MethodId::SAGA:
    case MethodId::SAG:
      if (form == Form::BlockDiagonal) return p.at(0) > 0.0 && p.at(1) > 0.0;
      return p.at(0) > 0.0 && is_pd(sym2(p.at(0) + nn * p.at(2), std::sqrt(nn) * p.at(3), p.at(1)));
    case MethodId::SDCA: return p.at(0) > 0.0 && p.at(0) + nn * p.at(1) > 0.0;
    case MethodId::Finito:
      return p.at(0) > 0.0 && p.at(3) > 0.0 &&
             is_pd(sym2(p.at(0) + nn * p.at(1), nn * p.at(2), p.at(3) + nn * p.at(4)));
  }
  return false;
}

BundleReport evaluate_bundle(const LmiBundle& bundle, double tol) {
  BundleReport rep;
  for (const auto& b : bundle.nsd_blocks) {
    if (!b.all_finite()) throw Error(ErrorCode::InvalidMatrix, "bundle block has non-finite entries");
    rep.scale = std::max(rep.scale, b.frobenius_norm());
  }
  rep.nsd_ok = true;
  rep.worst_scaled = -std::numeric_limits<double>::infinity();
  for (const auto& b : bundle.nsd_blocks) {
    double top = max_eigenvalue(b);
    double scaled = rep.scale > 0.0 ? top / rep.scale : 0.0;
    rep.nsd_max_raw.push_back(top);
    rep.nsd_max_scaled.push_back(scaled);
    rep.worst_scaled = std::max(rep.worst_scaled, scaled);
    if (scaled > tol) rep.nsd_ok = false;
  }
  if (bundle.nsd_blocks.empty()) rep.worst_scaled = 0.0;
  rep.pd_ok = true;
  for (const auto& b : bundle.pd_blocks) {
    double lo = min_eigenvalue(b);
    rep.pd_min_raw.push_back(lo);
    if (!(lo > 0.0)) rep.pd_ok = false;
  }
  rep.nonneg_ok = std::all_of(bundle.nonneg_scalars.begin(), bundle.nonneg_scalars.end(),
                              [](double v) { return v >= 0.0; });
  rep.feasible = rep.nsd_ok && rep.pd_ok && rep.nonneg_ok;
  return rep;
}

SymMatrix multiplier_term(const JumpRealization& r, const AssumptionProfile& a, MultiplierPair mult) {
  const std::size_t n = r.n();
  const std::size_t d = r.state_dim();
  const std::size_t dim = d + n;
  const Vector c = r.C_row();
  Matrix out(dim, dim);

  // Adds w * (ga gb^T + gb ga^T).
  auto add_pair = [&](const Vector& ga, const Vector& gb, double w) {
    if (w == 0.0) return;
    for (std::size_t i = 0; i < dim; ++i) {
      if (ga[i] == 0.0 && gb[i] == 0.0) continue;
      for (std::size_t j = 0; j < dim; ++j) out(i, j) += w * (ga[i] * gb[j] + gb[i] * ga[j]);
    }
  };

  Vector ga(dim, 0.0), gb(dim, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    ga[k] = a.L * c[k];
    gb[k] = a.nu * c[k];
  }
  for (std::size_t j = 0; j < n; ++j) {
    ga[d + j] = -1.0 / dn(n);
    gb[d + j] = 1.0 / dn(n);
  }
  add_pair(ga, gb, mult.lambda1);

  for (std::size_t i = 0; i < n; ++i) {
    std::fill(ga.begin(), ga.end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      ga[k] = a.L * c[k];
      gb[k] = a.gamma * c[k];
    }
    ga[d + i] = -1.0;
    gb[d + i] = 1.0;
    add_pair(ga, gb, mult.lambda2 / dn(n));
  }
  return SymMatrix(out);
}

SymMatrix full_lmi(const JumpRealization& r, const AssumptionProfile& a, double rho2, const SymMatrix& Pt,
                   MultiplierPair mult) {
  check_rho2(rho2);
  const std::size_t n = r.n();
  const std::size_t d = r.state_dim();
  if (Pt.dim() != d) throw Error(ErrorCode::DimensionMismatch, "P dimension must equal the state dimension");
  const Matrix& P = Pt.matrix();

  Matrix aa(d, d), ab(d, n), bb(n, n);
  Matrix pa(d, d), pb(d, n);
  for (std::size_t i = 1; i <= n; ++i) {
    SparseMatrix A = r.A_sparse(i);
    SparseMatrix B = r.B_sparse(i);
    pa = Matrix(d, d);
    pb = Matrix(d, n);
    for (const auto& t : A.entries)
      for (std::size_t row = 0; row < d; ++row) pa(row, t.col) += t.value * P(row, t.row);
    for (const auto& t : B.entries)
      for (std::size_t row = 0; row < d; ++row) pb(row, t.col) += t.value * P(row, t.row);
    for (const auto& t : A.entries) {
      for (std::size_t col = 0; col < d; ++col) aa(t.col, col) += t.value * pa(t.row, col);
      for (std::size_t col = 0; col < n; ++col) ab(t.col, col) += t.value * pb(t.row, col);
    }
    for (const auto& t : B.entries)
      for (std::size_t col = 0; col < n; ++col) bb(t.col, col) += t.value * pb(t.row, col);
  }

  const double inv = 1.0 / dn(n);
  Matrix m(d + n, d + n);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = inv * aa(i, j) - rho2 * P(i, j);
    for (std::size_t j = 0; j < n; ++j) {
      m(i, d + j) = inv * ab(i, j);
      m(d + j, i) = inv * ab(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(d + i, d + j) = inv * bb(i, j);
  m += multiplier_term(r, a, mult).matrix();
  return SymMatrix(m);
}

SymMatrix full_lmi_closed_form(const JumpRealization& r, const AssumptionProfile& a, double rho2, const StructuredP& P,
                               MultiplierPair mult) {
  check_rho2(rho2);
  if (P.method != r.method()) throw Error(ErrorCode::InvalidArgument, "P parameterization does not match the method");
  const std::size_t n = r.n();
  const double nn = dn(n);
  const double al = r.alpha();
  const double L = a.L, nu = a.nu, g = a.gamma;
  const double l1 = mult.lambda1, l2 = mult.lambda2;

  switch (r.method()) {
    case MethodId::SAGA: {
      const double p1 = P[0], p2 = P[1];
      // order: y (n), x (1), w (n)
      const std::size_t x = n, w = n + 1;
      Matrix m(2 * n + 1, 2 * n + 1);
      add_block(m, 0, 0, n, p2 * al * al / nn + (nn - 1.0) / nn * p1 - rho2 * p1, -al * al * p2 / (nn * nn));
      m(x, x) = (1.0 - rho2) * p2 + l1 * 2.0 * L * nu + l2 * 2.0 * L * g;
      add_block(m, 0, w, n, -al * al * p2 / nn, al * al * p2 / (nn * nn));
      for (std::size_t j = 0; j < n; ++j) {
        double v = -al * p2 / nn + l1 * (L - nu) / nn + l2 * (L - g) / nn;
        m(x, w + j) += v;
        m(w + j, x) += v;
      }
      add_block(m, w, w, n, (p1 + al * al * p2) / nn - 2.0 * l2 / nn, -2.0 * l1 / (nn * nn));
      return SymMatrix(m);
    }
    case MethodId::Finito: {
      const double p1 = P[0], p2 = P[1], p3 = P[2], p4 = P[3], p5 = P[4];
      // order: y (n), x (n), w (n)
      const std::size_t y = 0, x = n, w = 2 * n;
      Matrix m(3 * n, 3 * n);
      add_block(m, y, y, n, p2 / nn + (nn - 1.0) / nn * p1 - rho2 * p1,
                (1.0 - 2.0 / nn) * p2 - 2.0 * (1.0 - 1.0 / nn) * p3 * al + (p4 + p5) * al * al - rho2 * p2);
      add_block(m, y, x, n, p3 / nn, ((nn - 1.0 - 1.0 / nn) * p3 - p4 * al - nn * p5 * al) / nn - rho2 * p3);
      add_block(m, x, x, n, p5 / nn + (1.0 - 1.0 / nn) * p4 - rho2 * p4,
                p4 / (nn * nn) + (1.0 - 1.0 / (nn * nn)) * p5 - rho2 * p5);
      add_block(m, y, w, n, -p2 / nn, (p2 - p3 * al) / nn);
      add_block(m, x, w, n, -p3 / nn, (nn + 1.0) * p3 / (nn * nn));
      add_block(m, w, w, n, (p1 + p2) / nn, 0.0);
      // multiplier terms
      const double s1 = 2.0 * L * nu * l1 + 2.0 * L * g * l2;
      const double c1 = (L - nu) * l1 + (L - g) * l2;
      add_block(m, y, y, n, 0.0, s1 * al * al);
      add_block(m, y, x, n, 0.0, -s1 * al / nn);
      add_block(m, y, w, n, 0.0, -c1 * al / nn);
      add_block(m, x, x, n, 0.0, s1 / (nn * nn));
      add_block(m, x, w, n, 0.0, c1 / (nn * nn));
      add_block(m, w, w, n, -2.0 * l2 / nn, -2.0 * l1 / (nn * nn));
      return SymMatrix(m);
    }
    case MethodId::SDCA: {
      const double p1 = P[0], p2 = P[1];
      const double mm = *r.m();
      const double at = r.alpha_tilde();
      // order: y (n), w (n)
      const std::size_t y = 0, w = n;
      Matrix m(2 * n, 2 * n);
      add_block(m, y, y, n, p1 * (at * at - 2.0 * at + nn) / nn + p2 * at * at / nn - rho2 * p1,
                -p2 * (2.0 * at - nn) / nn - rho2 * p2);
      add_block(m, y, w, n, p1 * (at * at - at) / nn + p2 * at * at / nn, -at * p2 / nn);
      add_block(m, w, w, n, (p1 + p2) * at * at / nn, 0.0);
      add_block(m, y, y, n, 0.0, (2.0 * L * nu * l1 + 2.0 * L * g * l2) / (mm * mm * nn * nn));
      add_block(m, y, w, n, 0.0, ((L - nu) * l1 + (L - g) * l2) / (mm * nn * nn));
      add_block(m, w, w, n, -2.0 * l2 / nn, -2.0 * l1 / (nn * nn));
      return SymMatrix(m);
    }
    case MethodId::SAG: break;
  }
  throw Error(ErrorCode::Unsupported, "no closed-form assembly for SAG");
}

LmiBundle reduced_lmi_saga(const AssumptionProfile& a, std::size_t n, double alpha, double p1, double p2,
                           MultiplierPair mult, double rho2) {
  check_rho2(rho2);
  const double nn = dn(n);
  const double L = a.L, m = a.m, g = a.gamma;
  const double l1 = mult.lambda1, l2 = mult.lambda2;
  const double a2 = alpha * alpha;
  LmiBundle b;
  b.label = "saga-reduced";
  b.nsd_blocks.push_back(sym2(p2 * a2 + ((nn - 1.0) / nn - rho2) * nn * p1, -a2 * p2, p1 + a2 * p2 - 2.0 * l2));
  const double off = -alpha * p2 + (m + L) * l1 + (L - g) * l2;
  b.nsd_blocks.push_back(
      sym2((1.0 - rho2) * p2 - 2.0 * l1 * m * L + 2.0 * l2 * L * g, off, p1 + a2 * p2 - 2.0 * l2 - 2.0 * l1));
  b.pd_blocks.push_back(scalar_block(p1));
  b.pd_blocks.push_back(scalar_block(p2));
  b.nonneg_scalars = {l1, l2};
  b.params = base_params(a, n, alpha, mult, rho2);
  b.params["p"] = {p1, p2};
  return b;
}

LmiBundle reduced_lmi_finito(const AssumptionProfile& a, std::size_t n, double alpha, const std::array<double, 5>& p,
                             MultiplierPair mult, double rho2, FinitoPdVariant variant) {
  check_rho2(rho2);
  const double nn = dn(n);
  const double L = a.L, m = a.m, g = a.gamma;
  const double l1 = mult.lambda1, l2 = mult.lambda2;
  const auto [p1, p2, p3, p4, p5] = p;
  const double r = rho2;
  LmiBundle b;
  b.label = variant == FinitoPdVariant::Corrected ? "finito-reduced" : "finito-reduced-printed-pd";
  b.nsd_blocks.push_back(sym3(p2 - p1 + nn * (1.0 - r) * p1, p3, -p2, p5 - p4 + nn * (1.0 - r) * p4, -p3,
                              p1 + p2 - 2.0 * l2));
  const double x11 = (1.0 - 1.0 / nn - r) * p1 + p2 / nn - nn * r * p2 + (nn - 2.0) * p2 -
                     2.0 * (1.0 - 1.0 / nn) * p3 * alpha * nn +
                     (p4 + p5 - 2.0 * L * m * l1 + 2.0 * L * g * l2) * alpha * alpha * nn;
  const double x12 = (1.0 - r) * p3 * nn - p3 - (p4 + nn * p5 - 2.0 * L * m * l1 + 2.0 * L * g * l2) * alpha;
  const double x13 = (1.0 - 1.0 / nn) * p2 - (p3 + l1 * (L + m) + l2 * (L - g)) * alpha;
  const double c = p3 + ((L + m) * l1 + (L - g) * l2) / nn;
  b.nsd_blocks.push_back(sym3(x11, x12, x13, (p4 + nn * p5) * (1.0 - r) - (2.0 * L * m * l1 - 2.0 * L * g * l2) / nn,
                              c, (p1 + p2 - 2.0 * l1 - 2.0 * l2) / nn));
  b.pd_blocks.push_back(scalar_block(p1));
  b.pd_blocks.push_back(scalar_block(p4));
  const double corner = variant == FinitoPdVariant::Corrected ? p4 + nn * p5 : p4 + nn * p4;
  b.pd_blocks.push_back(sym2(p1 + nn * p2, nn * p3, corner));
  b.nonneg_scalars = {l1, l2};
  b.params = base_params(a, n, alpha, mult, rho2);
  b.params["p"] = {p1, p2, p3, p4, p5};
  return b;
}

LmiBundle reduced_lmi_sdca(const AssumptionProfile& a, std::size_t n, double alpha, double m, double p1, double p2,
                           MultiplierPair mult, double rho2) {
  check_rho2(rho2);
  const double nn = dn(n);
  const double L = a.L, g = a.gamma;
  const double l1 = mult.lambda1, l2 = mult.lambda2;
  const double at = alpha * m * nn;
  const double r = rho2;
  LmiBundle b;
  b.label = "sdca-reduced";
  const double d11 = p1 * (at * at - 2.0 * at + nn * (1.0 - r)) + p2 * at * at;
  const double d12 = p1 * (at * at - at) + at * at * p2;
  b.nsd_blocks.push_back(sym2(d11, d12, (p1 + p2) * at * at - 2.0 * l2));
  // p2 (at - n)^2 - n^2 r p2 written without the large cancelling terms.
  const double x11 = p1 * (at * at - 2.0 * at + nn * (1.0 - r)) + p2 * (at * at - 2.0 * at * nn + nn * nn * (1.0 - r)) +
                     2.0 * g * L * l2 / (m * m);
  const double x12 = p1 * (at * at - at) + at * (at - nn) * p2 + (l1 * L + (L - g) * l2) / m;
  b.nsd_blocks.push_back(sym2(x11, x12, (p1 + p2) * at * at - 2.0 * (l1 + l2)));
  b.pd_blocks.push_back(scalar_block(p1));
  b.pd_blocks.push_back(scalar_block(p1 + nn * p2));
  b.nonneg_scalars = {l1, l2};
  b.params = base_params(a, n, alpha, mult, rho2);
  b.params["p"] = {p1, p2};
  b.params["alpha_tilde"] = at;
  return b;
}

LmiBundle reduced_lmi(const AssumptionProfile& a, std::size_t n, double alpha, const StructuredP& P, MultiplierPair mult,
                      double rho2) {
  switch (P.method) {
    case MethodId::SAGA: return reduced_lmi_saga(a, n, alpha, P[0], P[1], mult, rho2);
    case MethodId::Finito:
      return reduced_lmi_finito(a, n, alpha, {P[0], P[1], P[2], P[3], P[4]}, mult, rho2);
    case MethodId::SDCA: return reduced_lmi_sdca(a, n, alpha, a.m, P[0], P[1], mult, rho2);
    case MethodId::SAG: break;
  }
  throw Error(ErrorCode::Unsupported, "no reduced LMI for SAG");
}

LmiBundle block_reduce(const std::array<double, 6>& mu, const std::array<double, 6>& q, std::size_t n, BlockShape shape) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  const double nn = dn(n);
  const double rn = std::sqrt(nn);
  LmiBundle b;
  switch (shape) {
    case BlockShape::Scalar:
      b.label = "block-scalar";
      b.pd_blocks.push_back(scalar_block(mu[0]));
      b.pd_blocks.push_back(scalar_block(mu[0] + nn * q[0]));
      break;
    case BlockShape::TwoByTwo:
      b.label = "block-2x2";
      b.nsd_blocks.push_back(sym2(mu[0], mu[2], mu[1]));
      b.nsd_blocks.push_back(sym2(mu[0] + nn * q[0], mu[2] + nn * q[2], mu[1] + nn * q[1]));
      break;
    case BlockShape::ThreeByThreeSaga:
      b.label = "block-3x3-saga";
      b.nsd_blocks.push_back(sym3(mu[0], 0.0, mu[5], mu[1], 0.0, mu[2]));
      b.nsd_blocks.push_back(
          sym3(mu[0] + nn * q[0], rn * q[3], mu[5] + nn * q[5], mu[1], rn * q[4], mu[2] + nn * q[2]));
      break;
    case BlockShape::ThreeByThreeFull:
      b.label = "block-3x3-full";
      b.nsd_blocks.push_back(sym3(mu[0], mu[3], mu[5], mu[1], mu[4], mu[2]));
      b.nsd_blocks.push_back(sym3(mu[0] + nn * q[0], mu[3] + nn * q[3], mu[5] + nn * q[5], mu[1] + nn * q[1],
                                  mu[4] + nn * q[4], mu[2] + nn * q[2]));
      break;
  }
  b.params = {{"n", n}, {"mu", mu}, {"q", q}};
  return b;
}

SymMatrix block_expand(const std::array<double, 6>& mu, const std::array<double, 6>& q, std::size_t n, BlockShape shape) {
  switch (shape) {
    case BlockShape::Scalar: {
      Matrix m(n, n);
      add_block(m, 0, 0, n, mu[0], q[0]);
      return SymMatrix(m);
    }
    case BlockShape::TwoByTwo: {
      Matrix m(2 * n, 2 * n);
      add_block(m, 0, 0, n, mu[0], q[0]);
      add_block(m, 0, n, n, mu[2], q[2]);
      add_block(m, n, n, n, mu[1], q[1]);
      return SymMatrix(m);
    }
    case BlockShape::ThreeByThreeSaga: {
      Matrix m(2 * n + 1, 2 * n + 1);
      add_block(m, 0, 0, n, mu[0], q[0]);
      add_block(m, 0, n + 1, n, mu[5], q[5]);
      add_block(m, n + 1, n + 1, n, mu[2], q[2]);
      m(n, n) = mu[1];
      for (std::size_t i = 0; i < n; ++i) {
        m(i, n) = m(n, i) = q[3];
        m(n + 1 + i, n) = m(n, n + 1 + i) = q[4];
      }
      return SymMatrix(m);
    }
    case BlockShape::ThreeByThreeFull: {
      Matrix m(3 * n, 3 * n);
      add_block(m, 0, 0, n, mu[0], q[0]);
      add_block(m, 0, n, n, mu[3], q[3]);
      add_block(m, 0, 2 * n, n, mu[5], q[5]);
      add_block(m, n, n, n, mu[1], q[1]);
      add_block(m, n, 2 * n, n, mu[4], q[4]);
      add_block(m, 2 * n, 2 * n, n, mu[2], q[2]);
      return SymMatrix(m);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown block shape");
}

StructuredP finito_relaxed_slice(std::size_t n, double alpha, double p1, double p4) {
  const double nn = dn(n);
  return StructuredP::finito(p1, alpha * alpha, -alpha / nn, p4, 1.0 / (nn * nn));
}

LmiBundle finito_relaxed(const AssumptionProfile& a, std::size_t n, double alpha, double p1, double p4,
                         MultiplierPair mult, double rho2) {
  const double nn = dn(n);
  if (!(rho2 >= 1.0 - 1.0 / nn && rho2 <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "relaxed Finito test needs 1 - 1/n <= rho2 <= 1");
  const double L = a.L, m = a.m, g = a.gamma;
  const double l1 = mult.lambda1, l2 = mult.lambda2;
  const double a2 = alpha * alpha;
  const double d = a2 - 2.0 * l2 + p1;
  if (!(d < 0.0)) throw Error(ErrorCode::PivotSignViolation, "alpha^2 - 2 lambda2 + p1 must be negative");
  const double d2 = a2 - 2.0 * l1 - 2.0 * l2 + p1;

  // Each scalar condition is divided by the sum of its term magnitudes.
  auto normalized = [](std::initializer_list<double> terms) {
    double v = 0.0, mag = 0.0;
    for (double t : terms) {
      v += t;
      mag += std::abs(t);
    }
    return scalar_block(mag > 0.0 ? v / mag : 0.0);
  };

  LmiBundle b;
  b.label = "finito-relaxed";
  b.nsd_blocks.push_back(normalized({a2, -2.0 * l2, p1}));
  b.nsd_blocks.push_back(normalized({nn * (1.0 - rho2) * p1, -p1, 2.0 * a2, -2.0 * a2 * a2 / d}));
  b.nsd_blocks.push_back(normalized({nn * (1.0 - rho2) * p4, -p4, 2.0 / (nn * nn), -2.0 * a2 / (nn * nn * d)}));
  const double num = (L + m) * l1 + (L - g) * l2 - alpha;
  b.nsd_blocks.push_back(
      normalized({p4, 1.0 - rho2, 2.0 * L * g * l2, -2.0 * L * m * l1, -num * num / d2}));
  b.pd_blocks.push_back(scalar_block(p1));
  b.pd_blocks.push_back(scalar_block(p4));
  b.nonneg_scalars = {l1, l2};
  b.params = base_params(a, n, alpha, mult, rho2);
  b.params["p1"] = p1;
  b.params["p4"] = p4;
  return b;
}

}  // namespace jumplmi
