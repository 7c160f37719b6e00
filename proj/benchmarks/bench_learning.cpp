#include <benchmark/benchmark.h>

#include <random>

#include "pqk/grid_search.hpp"
#include "pqk/kernel.hpp"
#include "pqk/metrics.hpp"
#include "pqk/svm.hpp"

namespace {

struct Data {
  pqk::Matrix x;
  std::vector<int> y;
};

Data make_data(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Data out{pqk::Matrix(n, d), std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.y[i] = i % 3 == 0 ? 1 : -1;
    for (std::size_t j = 0; j < d; ++j) out.x(i, j) = g(rng) + 0.4 * out.y[i];
  }
  return out;
}

void BM_KernelMatrix_Rbf(benchmark::State& state) {
  const auto d = make_data(static_cast<std::size_t>(state.range(0)), 180, 1);
  const pqk::KernelSpec spec{pqk::KernelKind::Rbf, pqk::Gamma::scale()};
  for (auto _ : state) benchmark::DoNotOptimize(pqk::kernel_matrix(d.x, spec));
}
BENCHMARK(BM_KernelMatrix_Rbf)->Arg(172)->Arg(246);

void BM_Smo(benchmark::State& state) {
  const auto d = make_data(172, 60, 2);
  const double c = static_cast<double>(state.range(0));
  const auto gram = pqk::kernel_matrix(d.x, pqk::KernelSpec{pqk::KernelKind::Rbf, pqk::Gamma::scale()});
  for (auto _ : state) benchmark::DoNotOptimize(pqk::smo_solve(gram, d.y, c));
}
BENCHMARK(BM_Smo)->Arg(1)->Arg(100)->Arg(2000);

void BM_GeometricDifference(benchmark::State& state) {
  const auto a = make_data(static_cast<std::size_t>(state.range(0)), 60, 3);
  const auto b = make_data(static_cast<std::size_t>(state.range(0)), 180, 4);
  const pqk::KernelSpec spec{pqk::KernelKind::Rbf, pqk::Gamma::scale()};
  const auto kc = pqk::kernel_matrix(a.x, spec), kq = pqk::kernel_matrix(b.x, spec);
  for (auto _ : state) benchmark::DoNotOptimize(pqk::geometric_difference(kc, kq, 1.0));
}
BENCHMARK(BM_GeometricDifference)->Arg(50)->Arg(172)->Unit(benchmark::kMillisecond);

void BM_GridSearch_Small(benchmark::State& state) {
  const auto d = make_data(120, 60, 5);
  pqk::GridSpec grid{{pqk::KernelKind::Linear, pqk::KernelKind::Rbf},
                     {0.1, 1.0, 10.0, 100.0},
                     {pqk::Gamma::scale(), pqk::Gamma::of(0.1), pqk::Gamma::of(1.0)}};
  for (auto _ : state) benchmark::DoNotOptimize(pqk::grid_search(d.x, d.y, grid, 10, 0));
}
BENCHMARK(BM_GridSearch_Small)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
