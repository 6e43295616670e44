#include <benchmark/benchmark.h>

#include <random>

#include "jumplmi/certificates.hpp"
#include "jumplmi/lmi.hpp"
#include "jumplmi/rate_search.hpp"
#include "jumplmi/simulation.hpp"

using namespace jumplmi;

static void BM_JacobiEigenvalues(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = nd(rng);
  SymMatrix s(m);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_sym(s));
}
BENCHMARK(BM_JacobiEigenvalues)->Arg(10)->Arg(50)->Arg(150);

static void BM_FullLmiAssembly(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  auto c = saga_certificate(Assumption::StronglyConvex, 0.1, 1.0, n, 0.3);
  auto r = build_realization(MethodId::SAGA, n, c.alpha);
  SymMatrix P = c.P.to_matrix(n);
  auto prof = c.profile();
  for (auto _ : state) benchmark::DoNotOptimize(full_lmi(r, prof, c.rho2, P, c.mult));
}
BENCHMARK(BM_FullLmiAssembly)->Arg(10)->Arg(50)->Arg(200);

static void BM_ReducedVerify(benchmark::State& state) {
  auto c = finito_certificate(Assumption::StronglyConvex, 0.01, 1.0, 71);
  for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(c));
}
BENCHMARK(BM_ReducedVerify);

static void BM_FeasibleAt(benchmark::State& state) {
  SearchProblem prob{MethodId::SAGA, Assumption::StronglyConvex, 0.1, 1.0, 50, 1.0 / 3.0, SearchSpace::Reduced};
  SearchConfig cfg;
  cfg.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(feasible_at(prob, 0.99, cfg));
}
BENCHMARK(BM_FeasibleAt)->Unit(benchmark::kMillisecond);

static void BM_RunMethod(benchmark::State& state) {
  const auto method = static_cast<MethodId>(state.range(0));
  const Assumption cls = method == MethodId::SDCA ? Assumption::ConvexSmooth : Assumption::StronglyConvex;
  auto q = generate_problem(method, cls, 0.5, 1.0, 20, 5, 1);
  StructuredP P = method == MethodId::SAGA     ? StructuredP::saga(1, 1)
                  : method == MethodId::SAG    ? StructuredP::sag(1, 1)
                  : method == MethodId::Finito ? StructuredP::finito(1, 0, 0, 1, 0)
                                               : StructuredP::sdca(1, 0);
  double alpha = method == MethodId::SDCA ? 1.0 / 11.0 : 0.2;
  SimulationConfig cfg;
  cfg.trials = 20;
  for (auto _ : state) benchmark::DoNotOptimize(run_method(method, q, alpha, P, 0.99, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(cfg.trials * cfg.iters));
}
BENCHMARK(BM_RunMethod)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
