// Serial-vs-OpenMP comparison for the three hot kernels plus one full
// compiled-translation application. Run: ./benchmarks/cohwalk_bench

#include <benchmark/benchmark.h>

#include <random>

#include "cohwalk/band.hpp"
#include "cohwalk/fock.hpp"
#include "cohwalk/kernels.hpp"

using namespace cohwalk;
using cohwalk::cd;
namespace k = cohwalk::kernels;

namespace {

k::CMatrix random_matrix(int n) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  k::CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cd{d(rng), d(rng)};
  return m;
}

k::CVector random_vector(int n) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  k::CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cd{d(rng), d(rng)};
  return v;
}

void bench_matvec(benchmark::State& state, k::Exec exec) {
  const int n = static_cast<int>(state.range(0));
  const k::CMatrix a = random_matrix(n);
  const k::CVector x = random_vector(n);
  k::CVector y;
  for (auto _ : state) {
    k::matvec(a, x, y, exec);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetBytesProcessed(state.iterations() * n * n * sizeof(cd));
}

void bench_gram(benchmark::State& state, k::Exec exec) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<cd> amps(static_cast<std::size_t>(n));
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = i - n / 2;
    amps[static_cast<std::size_t>(i)] = cd{d(rng), d(rng)};
  }
  for (auto _ : state) benchmark::DoNotOptimize(k::gram_bilinear(xs, amps, 0.8, true, exec));
}

void bench_quadrature(benchmark::State& state, k::Exec exec) {
  const int count = static_cast<int>(state.range(0));
  const CoinAngles a{M_PI / 4, M_PI / 8};
  for (auto _ : state) {
    const double v = k::bz_mean(count, true,
                                [&](double kk) {
                                  return std::cos(100.0 * quasienergy(kk, a)) *
                                         chiral_curvature(kk, a);
                                },
                                exec);
    benchmark::DoNotOptimize(v);
  }
}

void bench_translation(benchmark::State& state, k::Exec exec) {
  const k::Exec saved = k::default_exec();
  k::set_default_exec(exec);
  const double alpha = 1.5;
  const FockSpace space{static_cast<int>(state.range(0))};
  const GateSequence seq = compile_translation(alpha, false);
  QubitCavityState s{space.dim, Eigen::VectorXcd::Zero(2 * space.dim)};
  s.amps.segment(0, space.dim) = coherent_vector(cd{2.0 * alpha, 0.0}, space);
  for (auto _ : state) {
    QubitCavityState t = s;
    apply_sequence(seq, t);
    benchmark::DoNotOptimize(t.amps.data());
  }
  k::set_default_exec(saved);
}

}  // namespace

BENCHMARK_CAPTURE(bench_matvec, serial, k::Exec::Serial)->Arg(256)->Arg(1024)->Arg(1672);
BENCHMARK_CAPTURE(bench_matvec, openmp, k::Exec::Parallel)->Arg(256)->Arg(1024)->Arg(1672);
BENCHMARK_CAPTURE(bench_gram, serial, k::Exec::Serial)->Arg(81)->Arg(201);
BENCHMARK_CAPTURE(bench_gram, openmp, k::Exec::Parallel)->Arg(81)->Arg(201);
BENCHMARK_CAPTURE(bench_quadrature, serial, k::Exec::Serial)->Arg(2048)->Arg(8192);
BENCHMARK_CAPTURE(bench_quadrature, openmp, k::Exec::Parallel)->Arg(2048)->Arg(8192);
BENCHMARK_CAPTURE(bench_translation, serial, k::Exec::Serial)->Arg(256);
BENCHMARK_CAPTURE(bench_translation, openmp, k::Exec::Parallel)->Arg(256);

BENCHMARK_MAIN();
