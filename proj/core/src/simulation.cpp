#include "jumplmi/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "jumplmi/error.hpp"
#include "jumplmi/jump_models.hpp"

namespace jumplmi {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::pair<double, double> entry_range(Assumption a, double m, double L) {
  switch (a) {
    case Assumption::StronglyConvex: return {m, L};
    case Assumption::ConvexSmooth: return {0.0, L};
    case Assumption::SmoothOnly: return {-L, L};
  }
  return {m, L};
}

// Shifts vals to have mean target, then shrinks deviations until every entry lies in [lo, hi].
void fit_to_mean(std::vector<double>& vals, double target, double lo, double hi) {
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(vals.size());
  double s = 1.0;
  for (double v : vals) {
    double d = v - mean;
    if (target + d > hi) s = std::min(s, (hi - target) / d);
    if (target + d < lo) s = std::min(s, (lo - target) / d);
  }
  s = std::max(s, 0.0);
  for (double& v : vals) v = std::clamp(target + s * (v - mean), lo, hi);
}

double sqnorm(const double* a, std::size_t p) {
  double s = 0.0;
  for (std::size_t k = 0; k < p; ++k) s += a[k] * a[k];
  return s;
}

double sqdist(const double* a, const double* b, std::size_t p) {
  double s = 0.0;
  for (std::size_t k = 0; k < p; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

}  // namespace

QuadraticFiniteSum generate_problem(MethodId method, Assumption assumption, double m, double L, std::size_t n,
                                    std::size_t p, std::uint64_t seed) {
  if (!(m > 0.0) || !(L >= m) || !std::isfinite(L)) throw Error(ErrorCode::InvalidArgument, "requires 0 < m <= L");
  if (p == 0) throw Error(ErrorCode::InvalidArgument, "p must be positive");
  if (n < 2) throw Error(ErrorCode::InfeasibleClass, "requires n >= 2");
  const double nn = static_cast<double>(n);
  auto [lo, hi] = entry_range(assumption, m, L);

  QuadraticFiniteSum q;
  q.n = n;
  q.p = p;
  q.m = m;
  q.L = L;
  q.assumption = assumption;
  q.regularizer = method == MethodId::SDCA ? m : 0.0;
  q.D.assign(n * p, 0.0);
  q.b.assign(n * p, 0.0);

  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unif(lo, hi);
  std::normal_distribution<double> normal(0.0, 1.0);

  const bool force_negative = assumption == Assumption::SmoothOnly && n >= 3;
  for (std::size_t k = 0; k < p; ++k) {
    double t = p == 1 ? m : m + (L - m) * static_cast<double>(k) / static_cast<double>(p - 1);
    if (k == p - 1) t = L;
    std::vector<double> col(n);
    for (double& v : col) v = unif(rng);
    if (force_negative && k == 0) {
      double room = (nn - 1.0) * L - nn * t;
      if (!(room > 0.0))
        throw Error(ErrorCode::InfeasibleClass, "smooth instance needs a negative curvature entry; requires m < L(n-1)/n");
      double c = 0.5 * std::min(L, room);
      std::vector<double> rest(col.begin() + 1, col.end());
      fit_to_mean(rest, (nn * t + c) / (nn - 1.0), lo, hi);
      col[0] = -c;
      std::copy(rest.begin(), rest.end(), col.begin() + 1);
    } else {
      fit_to_mean(col, t, lo, hi);
    }
    for (std::size_t i = 0; i < n; ++i) q.D[i * p + k] = col[i];
  }
  for (double& v : q.b) v = normal(rng);
  q.xstar = q.minimizer();
  return q;
}

std::size_t sample_index(std::uint64_t seed, std::uint64_t trial, std::uint64_t iteration, std::size_t n) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (trial * 0xd1b54a32d192ed03ULL));
  h = splitmix64(h ^ (iteration * 0x8cb92ba72f3d8dd7ULL));
  __extension__ typedef unsigned __int128 u128;
  return static_cast<std::size_t>((static_cast<u128>(h) * n) >> 64);
}

MethodRunner::MethodRunner(MethodId method, const QuadraticFiniteSum& problem, double alpha, const Vector& xi0)
    : method_(method), problem_(&problem), alpha_(alpha), n_(problem.n), p_(problem.p) {
  const std::size_t n = n_, p = p_;
  std::size_t dim = n * p;
  if (method == MethodId::SAGA || method == MethodId::SAG) dim += p;
  if (method == MethodId::Finito) dim += n * p;
  if (xi0.size() != dim) throw Error(ErrorCode::DimensionMismatch, "initial state has wrong dimension");
  if (method == MethodId::SDCA && !(problem.regularizer > 0.0))
    throw Error(ErrorCode::MissingRegularizer, "SDCA needs the l2 regularizer");
  y_.assign(xi0.begin(), xi0.begin() + static_cast<std::ptrdiff_t>(n * p));
  sy_.assign(p, 0.0);
  sx_.assign(p, 0.0);
  g_.assign(p, 0.0);
  v_.assign(p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < p; ++k) sy_[k] += y_[i * p + k];
  switch (method) {
    case MethodId::SAGA:
    case MethodId::SAG: x_.assign(xi0.begin() + static_cast<std::ptrdiff_t>(n * p), xi0.end()); break;
    case MethodId::Finito:
      xs_.assign(xi0.begin() + static_cast<std::ptrdiff_t>(n * p), xi0.end());
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < p; ++k) sx_[k] += xs_[i * p + k];
      break;
    case MethodId::SDCA: x_ = sdca_dual_iterate(); break;
  }
}

void MethodRunner::step(std::size_t i1) {
  if (i1 < 1 || i1 > n_) throw Error(ErrorCode::InvalidArgument, "component index must be in 1..n");
  const std::size_t i = i1 - 1, p = p_;
  const double nn = static_cast<double>(n_);
  double* yi = y_.data() + i * p;
  switch (method_) {
    case MethodId::SAGA:
      problem_->gradient(i, x_.data(), g_.data());
      for (std::size_t j = 0; j < p; ++j) {
        x_[j] -= alpha_ * (g_[j] - yi[j] + sy_[j] / nn);
        sy_[j] += g_[j] - yi[j];
        yi[j] = g_[j];
      }
      break;
    case MethodId::SAG:
      problem_->gradient(i, x_.data(), g_.data());
      for (std::size_t j = 0; j < p; ++j) {
        x_[j] -= (alpha_ / nn) * (sy_[j] - yi[j] + g_[j]);
        sy_[j] += g_[j] - yi[j];
        yi[j] = g_[j];
      }
      break;
    case MethodId::Finito: {
      double* xi = xs_.data() + i * p;
      for (std::size_t j = 0; j < p; ++j) v_[j] = sx_[j] / nn - alpha_ * sy_[j];
      problem_->gradient(i, v_.data(), g_.data());
      for (std::size_t j = 0; j < p; ++j) {
        sx_[j] += v_[j] - xi[j];
        xi[j] = v_[j];
        sy_[j] += g_[j] - yi[j];
        yi[j] = g_[j];
      }
      break;
    }
    case MethodId::SDCA: {
      const double at = alpha_ * problem_->regularizer * nn;
      problem_->gradient(i, x_.data(), g_.data());
      for (std::size_t j = 0; j < p; ++j) {
        double d = -at * (yi[j] + g_[j]);
        x_[j] -= alpha_ * (yi[j] + g_[j]);
        yi[j] += d;
        sy_[j] += d;
      }
      break;
    }
  }
  ++grad_evals_;
}

Vector MethodRunner::state() const {
  Vector out = y_;
  if (method_ == MethodId::SAGA || method_ == MethodId::SAG) out.insert(out.end(), x_.begin(), x_.end());
  if (method_ == MethodId::Finito) out.insert(out.end(), xs_.begin(), xs_.end());
  return out;
}

Vector MethodRunner::iterate() const {
  if (method_ != MethodId::Finito) return x_;
  Vector v(p_);
  for (std::size_t j = 0; j < p_; ++j) v[j] = sx_[j] / static_cast<double>(n_) - alpha_ * sy_[j];
  return v;
}

Vector MethodRunner::sdca_dual_iterate() const {
  if (method_ != MethodId::SDCA) throw Error(ErrorCode::InvalidArgument, "SDCA only");
  Vector x(p_);
  const double scale = 1.0 / (problem_->regularizer * static_cast<double>(n_));
  for (std::size_t j = 0; j < p_; ++j) x[j] = sy_[j] * scale;
  return x;
}

SimulationTrace run_method(MethodId method, const QuadraticFiniteSum& problem, double alpha, const StructuredP& P,
                           double rho2, const SimulationConfig& cfg) {
  const std::size_t n = problem.n, p = problem.p;
  if (!(alpha >= 0.0)) throw Error(ErrorCode::StepsizeOutOfRange, "alpha must be nonnegative");
  if (P.method != method) throw Error(ErrorCode::InvalidArgument, "P does not belong to the method");
  if (method == MethodId::SDCA && !(problem.regularizer > 0.0))
    throw Error(ErrorCode::MissingRegularizer, "SDCA needs the l2 regularizer");
  if (cfg.trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be positive");
  const double nn = static_cast<double>(n);

  QuadraticFiniteSum ref = problem;
  if (method != MethodId::SDCA) ref.regularizer = 0.0;
  const Vector xstar = ref.minimizer();
  const Vector wstar = stacked_gradients(problem, xstar);
  // Table equilibrium: w* for SAGA/SAG/Finito, -w* for SDCA.
  Vector ystar = wstar;
  if (method == MethodId::SDCA)
    for (double& v : ystar) v = -v;
  Vector sum_ystar(p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < p; ++k) sum_ystar[k] += ystar[i * p + k];

  const std::vector<double>& c = P.p;
  auto pk = [&](std::size_t idx) { return idx < c.size() ? c[idx] : 0.0; };

  Vector x0(p);
  {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ 0x5eedULL));
    std::normal_distribution<double> normal(0.0, 1.0);
    double s;
    do {
      for (double& v : x0) v = normal(rng);
      s = std::sqrt(sqnorm(x0.data(), p));
    } while (!(s > 0.0));
    for (std::size_t k = 0; k < p; ++k) x0[k] = xstar[k] + x0[k] / s;
  }
  Vector xi0(n * p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* yi = xi0.data() + i * p;
    if (method == MethodId::SDCA)
      for (std::size_t k = 0; k < p; ++k) yi[k] = problem.regularizer * x0[k];
    else if (cfg.table_init == TableInit::GradientAtStart)
      problem.gradient(i, x0.data(), yi);
  }
  if (method == MethodId::SAGA || method == MethodId::SAG) xi0.insert(xi0.end(), x0.begin(), x0.end());
  if (method == MethodId::Finito)
    for (std::size_t i = 0; i < n; ++i) xi0.insert(xi0.end(), x0.begin(), x0.end());

  SimulationTrace tr;
  tr.method = method;
  tr.alpha = alpha;
  tr.rho2 = rho2;
  tr.trials = cfg.trials;
  tr.seed = cfg.seed;
  {
    Vector ev = eigenvalues_sym(P.to_matrix(n));
    tr.cond_P = ev.front() > 0.0 ? ev.back() / ev.front() : std::numeric_limits<double>::infinity();
  }
  const std::size_t K = cfg.iters + 1;
  std::vector<double> meanV(K, 0.0), m2V(K, 0.0), meanD(K, 0.0), meanXi(K, 0.0);
  Vector dSy(p), dSx(p), dx(p);

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    MethodRunner run(method, problem, alpha, xi0);
    double Qy = 0.0, Qx = 0.0;
    auto refresh = [&] {
      Qy = 0.0;
      Qx = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        Qy += sqdist(run.y(i), ystar.data() + i * p, p);
        if (method == MethodId::Finito) Qx += sqdist(run.xs(i), xstar.data(), p);
      }
    };
    refresh();

    auto record = [&](std::size_t k) {
      const Vector& Sy = run.sum_y();
      const Vector& Sx = run.sum_x();
      const Vector x = run.iterate();
      for (std::size_t j = 0; j < p; ++j) {
        dSy[j] = Sy[j] - sum_ystar[j];
        dSx[j] = Sx[j] - nn * xstar[j];
        dx[j] = x[j] - xstar[j];
      }
      double V = 0.0, xi = 0.0;
      const double dist = sqnorm(dx.data(), p);
      switch (method) {
        case MethodId::SAGA:
        case MethodId::SAG:
          if (P.form == StructuredP::Form::PermutationInvariant) {
            double cross = 0.0;
            for (std::size_t j = 0; j < p; ++j) cross += dSy[j] * dx[j];
            V = pk(0) * Qy + pk(2) * sqnorm(dSy.data(), p) + 2.0 * pk(3) * cross + pk(1) * dist;
          } else {
            V = pk(0) * Qy + pk(1) * dist;
          }
          xi = Qy + dist;
          break;
        case MethodId::SDCA:
          V = pk(0) * Qy + pk(1) * sqnorm(dSy.data(), p);
          xi = Qy;
          break;
        case MethodId::Finito: {
          double cross = 0.0;
          for (std::size_t j = 0; j < p; ++j) cross += dSy[j] * dSx[j];
          V = pk(0) * Qy + pk(1) * sqnorm(dSy.data(), p) + 2.0 * pk(2) * cross + pk(3) * Qx +
              pk(4) * sqnorm(dSx.data(), p);
          xi = Qy + Qx;
          break;
        }
      }
      V = std::max(V, 0.0);
      // Welford update across trials.
      double cnt = static_cast<double>(t + 1);
      double delta = V - meanV[k];
      meanV[k] += delta / cnt;
      m2V[k] += delta * (V - meanV[k]);
      meanD[k] += (dist - meanD[k]) / cnt;
      meanXi[k] += (xi - meanXi[k]) / cnt;
    };

    record(0);
    for (std::size_t it = 0; it < cfg.iters; ++it) {
      const std::size_t i = sample_index(cfg.seed, t, it, n);
      const double* ysi = ystar.data() + i * p;
      double old_y = sqdist(run.y(i), ysi, p);
      double old_x = method == MethodId::Finito ? sqdist(run.xs(i), xstar.data(), p) : 0.0;
      run.step(i + 1);
      Qy += sqdist(run.y(i), ysi, p) - old_y;
      if (method == MethodId::Finito) Qx += sqdist(run.xs(i), xstar.data(), p) - old_x;
      if ((it + 1) % n == 0) refresh();
      record(it + 1);
    }
    tr.gradient_evals += run.gradient_evals();
  }

  tr.V0 = meanV[0];
  tr.xi_dist2_0 = meanXi[0];
  const double T = static_cast<double>(cfg.trials);
  for (std::size_t k = 0; k < K; ++k) {
    tr.k.push_back(k);
    tr.mean_V.push_back(meanV[k]);
    double var = cfg.trials > 1 ? m2V[k] / (T - 1.0) : 0.0;
    tr.stderr_V.push_back(std::sqrt(std::max(var, 0.0) / T));
    double decay = std::pow(rho2, static_cast<double>(k));
    tr.envelope.push_back(decay * tr.V0);
    tr.cond_envelope.push_back(decay * tr.cond_P * tr.xi_dist2_0);
    tr.mean_dist2.push_back(meanD[k]);
    tr.mean_xi_dist2.push_back(meanXi[k]);
  }
  return tr;
}

double lyapunov_value(const SymMatrix& P, const Vector& state, const Vector& xistar, std::size_t p) {
  if (state.size() != xistar.size() || state.size() != P.dim() * p)
    throw Error(ErrorCode::DimensionMismatch, "state does not match P");
  Vector d(state.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = state[k] - xistar[k];
  Vector Pd = lift_apply(P.matrix(), d, p);
  return dot(d, Pd);
}

std::vector<Vector> sample_states(MethodId method, const QuadraticFiniteSum& problem, double alpha, std::size_t count,
                                  std::uint64_t seed) {
  JumpRealization r = build_realization(method, problem.n, alpha, problem.regularizer);
  EquilibriumData eq = equilibrium(method, problem);
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(sseq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> expo(-2.0, 1.0);
    double scale = std::pow(10.0, expo(rng));
    Vector st = eq.xistar;
    for (double& v : st) v += scale * normal(rng);
    std::size_t steps = static_cast<std::size_t>(rng() % (2 * problem.n + 1));
    for (std::size_t k = 0; k < steps; ++k) st = step_exact(r, st, problem, 1 + rng() % problem.n);
    out.push_back(std::move(st));
  }
  return out;
}

ContractionReport check_onestep_contraction(const RateCertificate& cert, const QuadraticFiniteSum& problem,
                                            const std::vector<Vector>& states) {
  if (problem.n != cert.n) throw Error(ErrorCode::DimensionMismatch, "problem and certificate disagree on n");
  QuadraticFiniteSum q = problem;
  if (cert.method == MethodId::SDCA) q.regularizer = cert.m;
  JumpRealization r = build_realization(cert.method, cert.n, cert.alpha, cert.m);
  EquilibriumData eq = equilibrium(cert.method, q);
  SymMatrix Pm = cert.P.to_matrix(cert.n);
  ContractionReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  rep.max_relative = -std::numeric_limits<double>::infinity();
  for (const Vector& st : states) {
    double V = lyapunov_value(Pm, st, eq.xistar, q.p);
    double EV = 0.0;
    for (std::size_t i = 1; i <= cert.n; ++i) EV += lyapunov_value(Pm, step_exact(r, st, q, i), eq.xistar, q.p);
    EV /= static_cast<double>(cert.n);
    double viol = EV - cert.rho2 * V;
    rep.max_violation = std::max(rep.max_violation, viol);
    rep.max_relative = std::max(rep.max_relative, viol / std::max(1.0, V));
    ++rep.states;
  }
  if (states.empty()) rep.max_violation = rep.max_relative = 0.0;
  return rep;
}

EmpiricalRate empirical_rate(const SimulationTrace& trace) {
  if (trace.mean_V.size() < 51) throw Error(ErrorCode::InvalidArgument, "requires at least 50 iterations");
  if (trace.trials < 100) throw Error(ErrorCode::InvalidArgument, "requires at least 100 trials");
  if (!(trace.V0 > 0.0)) throw Error(ErrorCode::DegenerateTrace, "V0 is zero");
  EmpiricalRate er;
  double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0, cnt = 0.0;
  for (std::size_t k = 0; k < trace.mean_V.size(); ++k) {
    double mv = trace.mean_V[k];
    if (mv > 0.0) {
      double kk = static_cast<double>(trace.k[k]);
      double ly = std::log(mv);
      sk += kk;
      sy += ly;
      skk += kk * kk;
      sky += kk * ly;
      cnt += 1.0;
    }
    double rel = mv > 0.0 ? trace.stderr_V[k] / mv : 0.0;
    double bound = trace.envelope[k] * (1.0 + 3.0 * rel);
    double ratio = bound > 0.0 ? mv / bound : (mv > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    er.max_ratio = std::max(er.max_ratio, ratio);
    if (mv > bound) {
      er.envelope_ok = false;
      if (!er.first_violation) er.first_violation = trace.k[k];
    }
  }
  double den = cnt * skk - sk * sk;
  er.slope = den > 0.0 ? (cnt * sky - sk * sy) / den : 0.0;
  er.fitted_rho2 = std::exp(er.slope);
  return er;
}

void write_trace_csv(const SimulationTrace& trace, std::ostream& out) {
  out << "k,mean_V,stderr_V,envelope,envelope_status,mean_dist2,cond_envelope,mean_xi_dist2\n";
  out.precision(17);
  for (std::size_t k = 0; k < trace.k.size(); ++k) {
    double mv = trace.mean_V[k];
    double rel = mv > 0.0 ? trace.stderr_V[k] / mv : 0.0;
    bool ok = mv <= trace.envelope[k] * (1.0 + 3.0 * rel);
    out << trace.k[k] << ',' << mv << ',' << trace.stderr_V[k] << ',' << trace.envelope[k] << ','
        << (ok ? "ok" : "violated") << ',' << trace.mean_dist2[k] << ',' << trace.cond_envelope[k] << ','
        << trace.mean_xi_dist2[k] << '\n';
  }
}

}  // namespace jumplmi
