#include <benchmark/benchmark.h>

#include <random>

#include "pqk/circuit.hpp"
#include "pqk/pauli.hpp"
#include "pqk/statevector.hpp"

namespace {

std::vector<double> one_hot_like(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> x(n, 0.0);
  for (std::size_t p = 0; p < n; p += 15) x[p + rng() % std::min<std::size_t>(15, n - p)] = 1.0;
  return x;
}

void BM_Statevector_E1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = pqk::build_zz_feature_map(one_hot_like(n, 1), 8, pqk::kScaleHalfPi,
                                           pqk::Entanglement::Linear, pqk::PairMap::Shifted);
  for (auto _ : state) benchmark::DoNotOptimize(pqk::bloch_vectors(pqk::statevector_simulate(c)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Statevector_E1)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);

void BM_Obp_E1_60(benchmark::State& state) {
  const double threshold = static_cast<double>(state.range(0)) / 100.0;
  const auto c = pqk::build_zz_feature_map(one_hot_like(60, 2), 8, pqk::kScaleHalfPi,
                                           pqk::Entanglement::Linear, pqk::PairMap::Shifted);
  for (auto _ : state)
    benchmark::DoNotOptimize(pqk::obp_pauli_expectation(c, 30, pqk::PauliAxis::Z, threshold));
}
BENCHMARK(BM_Obp_E1_60)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Obp_E2_61(benchmark::State& state) {
  const auto c = pqk::build_heisenberg_embedding(one_hot_like(60, 3), 4, 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(pqk::obp_pauli_expectation(c, 30, pqk::PauliAxis::Z, 0.05));
}
BENCHMARK(BM_Obp_E2_61)->Unit(benchmark::kMillisecond);

void BM_CircuitBuild_E2(benchmark::State& state) {
  const auto x = one_hot_like(60, 4);
  for (auto _ : state) benchmark::DoNotOptimize(pqk::build_heisenberg_embedding(x, 6, 7));
}
BENCHMARK(BM_CircuitBuild_E2);

}  // namespace
