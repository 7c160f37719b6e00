#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "pqk/circuit.hpp"

using namespace pqk;

namespace {

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

std::vector<double> random_binary(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = static_cast<double>(rng() % 2);
  return x;
}

}  // namespace

struct StatsCase {
  EmbeddingKind kind;
  unsigned reps;
  CircuitStats expected;
};

class ReferenceCircuitStats : public ::testing::TestWithParam<StatsCase> {};

TEST_P(ReferenceCircuitStats, Exact) {
  const auto& p = GetParam();
  const auto c = p.kind == EmbeddingKind::ZZFeatureMap
                     ? build_zz_feature_map(random_binary(60, p.reps), p.reps, kScaleHalfPi)
                     : build_heisenberg_embedding(random_binary(60, p.reps), p.reps, 7);
  EXPECT_EQ(circuit_stats(c), p.expected);
}

INSTANTIATE_TEST_SUITE_P(
    Sizes, ReferenceCircuitStats,
    ::testing::Values(StatsCase{EmbeddingKind::ZZFeatureMap, 4, {1188, 472, 16}},
                      StatsCase{EmbeddingKind::ZZFeatureMap, 6, {1782, 708, 24}},
                      StatsCase{EmbeddingKind::ZZFeatureMap, 8, {2376, 944, 32}},
                      StatsCase{EmbeddingKind::ZZFeatureMap, 12, {3564, 1416, 48}},
                      StatsCase{EmbeddingKind::Heisenberg, 4, {4141, 1440, 48}},
                      StatsCase{EmbeddingKind::Heisenberg, 6, {6181, 2160, 72}}));

TEST(ZZFeatureMap, TwoQubitGateSequence) {
  const auto c = build_zz_feature_map(std::vector<double>{1, 1}, 1, kScalePi);
  std::vector<GateKind> kinds;
  for (const auto& g : c.gates()) kinds.push_back(g.kind);
  using K = GateKind;
  EXPECT_EQ(kinds, (std::vector<K>{K::H, K::H, K::RZ, K::RZ, K::CX, K::RZ, K::CX}));
  EXPECT_EQ(circuit_stats(c), (CircuitStats{7, 2, 2}));
  EXPECT_DOUBLE_EQ(c.gates()[5].angle, 2.0 * kScalePi * kScalePi);
  EXPECT_EQ(c.gates()[5].qubits[0], 1u);
}

TEST(ZZFeatureMap, ClosedFormCounts) {
  for (std::size_t n : {3u, 4u, 7u, 10u})
    for (unsigned reps : {1u, 2u, 5u}) {
      const auto s = circuit_stats(build_zz_feature_map(ones(n), reps, kScaleHalfPi));
      EXPECT_EQ(s.total_gates, reps * (5 * n - 3));
      EXPECT_EQ(s.two_qubit_gates, reps * 2 * (n - 1));
      EXPECT_EQ(s.two_qubit_depth, 4 * reps);
    }
}

TEST(ZZFeatureMap, ZeroInputGivesZeroAngles) {
  const auto c = build_zz_feature_map(std::vector<double>(9, 0.0), 3, kScalePi);
  for (const auto& g : c.gates()) {
    if (g.is_rotation()) {
      EXPECT_EQ(g.angle, 0.0);
    }
  }
}

TEST(ZZFeatureMap, ShiftedPairMapKeepsCountsAndUsesOffsets) {
  const std::vector<double> x{1, 0, 1};
  const auto c = build_zz_feature_map(x, 2, kScaleHalfPi, Entanglement::Linear, PairMap::Shifted);
  EXPECT_EQ(circuit_stats(c), circuit_stats(build_zz_feature_map(x, 2, kScaleHalfPi)));
  // First pair core is the even edge (0,1): 2(π − π/2)(π − 0).
  EXPECT_DOUBLE_EQ(c.gates()[7].angle, 2.0 * (std::numbers::pi / 2) * std::numbers::pi);
}

TEST(ZZFeatureMap, RejectsTooFewQubits) {
  EXPECT_THROW(build_zz_feature_map(std::vector<double>{1}, 1, kScalePi), std::invalid_argument);
  EXPECT_THROW(build_zz_feature_map(ones(3), 0, kScalePi), std::invalid_argument);
}

TEST(Heisenberg, ThreeQubitsOneStep) {
  const auto s = circuit_stats(build_heisenberg_embedding(ones(2), 1, 1));
  EXPECT_EQ(s.total_gates, 3u + 2 * 11 + 2 * 6);
  EXPECT_EQ(s.two_qubit_gates, 12u);
}

TEST(Heisenberg, ClosedFormCounts) {
  for (std::size_t n : {3u, 5u, 8u})
    for (unsigned steps : {1u, 2u, 4u}) {
      const auto s = circuit_stats(build_heisenberg_embedding(ones(n - 1), steps, 3));
      EXPECT_EQ(s.total_gates, n + steps * 17 * (n - 1));
      EXPECT_EQ(s.two_qubit_gates, steps * 6 * (n - 1));
      EXPECT_EQ(s.two_qubit_depth, 12 * steps);
    }
}

TEST(Heisenberg, SeedControlsInitialLayer) {
  const auto x = random_binary(6, 1);
  EXPECT_EQ(build_heisenberg_embedding(x, 2, 5), build_heisenberg_embedding(x, 2, 5));
  EXPECT_NE(build_heisenberg_embedding(x, 2, 5), build_heisenberg_embedding(x, 2, 6));
  const auto c = build_heisenberg_embedding(x, 2, 5);
  for (std::uint32_t q = 0; q < 7; ++q) {
    EXPECT_EQ(c.gates()[q].kind, GateKind::RY);
    EXPECT_GE(c.gates()[q].angle, 0.0);
    EXPECT_LT(c.gates()[q].angle, 2.0 * std::numbers::pi);
  }
}

TEST(CircuitStats, EmptyAndParallel) {
  EXPECT_EQ(circuit_stats(Circuit(3)), (CircuitStats{0, 0, 0}));
  Circuit c(4);
  c.add(Gate::cx(0, 1));
  c.add(Gate::cx(2, 3));
  c.add(Gate::h(1));
  EXPECT_EQ(circuit_stats(c), (CircuitStats{3, 2, 1}));
  c.add(Gate::cx(1, 2));
  EXPECT_EQ(circuit_stats(c).two_qubit_depth, 2u);
}

TEST(Circuit, ValidatesGates) {
  Circuit c(2);
  EXPECT_THROW(c.add(Gate::h(2)), std::out_of_range);
  EXPECT_THROW(c.add(Gate::cx(1, 1)), std::invalid_argument);
  EXPECT_THROW(c.add(Gate::rz(0, std::numeric_limits<double>::infinity())), std::invalid_argument);
}

TEST(CircuitText, Golden) {
  const auto c = build_zz_feature_map(std::vector<double>{1, 0}, 1, kScaleHalfPi);
  std::ostringstream os;
  write_circuit(os, c);
  EXPECT_EQ(os.str(),
            "qubits=2 meta=embedding=e1;reps=1;scale=1.5707963267948966;seed=0;entanglement=linear\n"
            "H 0\n"
            "H 1\n"
            "RZ 0 3.141592653589793\n"
            "RZ 1 0\n"
            "CX 0 1\n"
            "RZ 1 0\n"
            "CX 0 1\n");
}

TEST(CircuitText, RoundTrip) {
  for (const auto& c : {build_zz_feature_map(random_binary(7, 2), 3, kScalePi, Entanglement::Full),
                        build_heisenberg_embedding(random_binary(5, 3), 2, 11),
                        build_zz_feature_map(random_binary(5, 4), 2, 0.3, Entanglement::Linear,
                                             PairMap::Shifted)}) {
    std::stringstream ss;
    write_circuit(ss, c);
    EXPECT_EQ(read_circuit(ss), c);
  }
}
