#include <benchmark/benchmark.h>

#include <cmath>

#include "lambdasim/lindblad.hpp"
#include "lambdasim/measures.hpp"
#include "lambdasim/spectral.hpp"

using namespace lambdasim;

namespace {

ModelParams lossy(int n, int p) {
  ModelParams m;
  m.n = n;
  m.p = p;
  m.omega = 0.1 * std::sqrt(static_cast<double>(n));
  m.kappa = 0.1;
  m.gamma0 = 0.05;
  m.gamma2 = 0.0025;
  return m;
}

DenseMatrix dark_density(const ModelParams& m, const BasisPtr& basis) {
  const StateVector z = master_dark_state(m, basis).vector;
  return z * z.adjoint();
}

void apply_liouvillian(benchmark::State& state, const ModelParams& m, const BasisPtr& basis) {
  const Liouvillian gen(hamiltonian(m, basis), jump_channels(m, basis));
  const DenseMatrix rho = dark_density(m, basis);
  DenseMatrix out, scratch;
  for (auto _ : state) {
    gen.apply_hermitian(rho, out, scratch);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["dim"] = static_cast<double>(basis->size());
}

void BM_LiouvillianSymmetric(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  apply_liouvillian(state, lossy(n, 3), enumerate_symmetric(n, 3));
}
BENCHMARK(BM_LiouvillianSymmetric)->Arg(4)->Arg(20);

void BM_LiouvillianFull(benchmark::State& state) {
  ModelParams m = lossy(4, 3);
  m.gamma10 = 0.05;
  m.gamma12 = 0.025;
  apply_liouvillian(state, m, enumerate_full(4, 3));
}
BENCHMARK(BM_LiouvillianFull);

void BM_LogNegativity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelParams m = lossy(n, 3);
  const auto basis = enumerate_symmetric(n, 3);
  const Bipartition bip = Bipartition::qutrits_vs_boson(*basis);
  const DenseMatrix rho = dark_density(m, basis);
  for (auto _ : state) benchmark::DoNotOptimize(log_negativity(rho, bip));
}
BENCHMARK(BM_LogNegativity)->Arg(4)->Arg(20);

void BM_EvolveUnitTime(benchmark::State& state) {
  const ModelParams m = lossy(20, 3);
  const auto basis = enumerate_symmetric(20, 3);
  const Operator h = hamiltonian(m, basis);
  const auto channels = jump_channels(m, basis);
  const DensityMatrix rho0 = DensityMatrix::pure(basis, master_dark_state(m, basis).vector);
  EvolveOptions opt;
  opt.t_max = 1.0;
  opt.rate_scale = m.rate_scale();
  opt.record_every = 1000000;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(rho0, h, channels, {}, opt).times.size());
}
BENCHMARK(BM_EvolveUnitTime)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
