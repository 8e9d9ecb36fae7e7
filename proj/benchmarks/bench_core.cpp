#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "polyinv/analytic.hpp"
#include "polyinv/eigensolver.hpp"
#include "polyinv/inverse.hpp"
#include "polyinv/response.hpp"
#include "polyinv/tridiagonal.hpp"

namespace {

using namespace polyinv;

void BM_LowestEigenpairs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double h = 24.0 / (n + 1);
  std::vector<double> d(n), e(n - 1, -0.5 / (h * h));
  for (int j = 0; j < n; ++j) {
    const double x = -12.0 + (j + 1) * h;
    d[j] = 1.0 / (h * h) + 0.5 * x * x;
  }
  for (auto _ : state) benchmark::DoNotOptimize(lowest_eigenpairs(d, e, 6));
  state.SetComplexityN(n);
}
BENCHMARK(BM_LowestEigenpairs)->RangeMultiplier(2)->Range(1000, 32000)->Complexity();

void BM_SolveAndExtract(benchmark::State& state) {
  const GridSpec g{-12.0, 12.0, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    const auto sol = solve(Harmonic{1.0}, g, 15);
    benchmark::DoNotOptimize(extract_spectra(sol, 15));
  }
}
BENCHMARK(BM_SolveAndExtract)->Arg(4001)->Arg(16001);

void BM_AutoGrid(benchmark::State& state) {
  const double eta = state.range(0) / 10.0;
  AutoGridOptions opts;
  opts.policy = GridPolicy::Converged;
  for (auto _ : state) benchmark::DoNotOptimize(auto_grid(HalfPower{eta}, 10, opts));
}
BENCHMARK(BM_AutoGrid)->Arg(5)->Arg(20)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_SvdLeastNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto s = qho_spectra(10.0, n);
  const Eigen::MatrixXd b = build_b_matrix(s);
  const Eigen::VectorXd c = build_c_vector(s);
  for (auto _ : state) benchmark::DoNotOptimize(svd_least_norm(b, c));
  state.counters["M"] = static_cast<double>(b.rows());
}
BENCHMARK(BM_SvdLeastNorm)->DenseRange(4, 10, 2);

void BM_BetaSos(benchmark::State& state) {
  const auto s = cqho_spectra(1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(beta_intrinsic(s));
}
BENCHMARK(BM_BetaSos)->Arg(15)->Arg(60);

void BM_Roundtrip(benchmark::State& state) {
  const auto s = qho_spectra(10.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(roundtrip(s));
}
BENCHMARK(BM_Roundtrip)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
