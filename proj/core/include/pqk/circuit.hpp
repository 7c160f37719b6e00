#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace pqk {

/// Gate alphabet. Rotations follow R_P(θ) = exp(-iθP/2).
enum class GateKind : std::uint8_t { H, RX, RY, RZ, CX };

std::string_view to_string(GateKind k);

struct Gate {
  GateKind kind = GateKind::H;
  /// Single-qubit gates use qubits[0]; CX is (control, target).
  std::array<std::uint32_t, 2> qubits{0, 0};
  double angle = 0.0;

  static Gate h(std::uint32_t q) { return {GateKind::H, {q, 0}, 0.0}; }
  static Gate rx(std::uint32_t q, double theta) { return {GateKind::RX, {q, 0}, theta}; }
  static Gate ry(std::uint32_t q, double theta) { return {GateKind::RY, {q, 0}, theta}; }
  static Gate rz(std::uint32_t q, double theta) { return {GateKind::RZ, {q, 0}, theta}; }
  static Gate cx(std::uint32_t control, std::uint32_t target) {
    return {GateKind::CX, {control, target}, 0.0};
  }

  [[nodiscard]] bool is_two_qubit() const { return kind == GateKind::CX; }
  [[nodiscard]] bool is_rotation() const {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
  }

  bool operator==(const Gate&) const = default;
};

enum class EmbeddingKind : std::uint8_t { Identity, ZZFeatureMap, Heisenberg };
enum class Entanglement : std::uint8_t { Linear, Full };
/// E1 pair-angle rule: `Product` uses 2·s²·x_j·x_k, `Shifted` uses
/// 2·(π − s·x_j)(π − s·x_k).
enum class PairMap : std::uint8_t { Product, Shifted };

std::string_view to_string(EmbeddingKind k);
std::string_view to_string(Entanglement e);
std::string_view to_string(PairMap p);

struct CircuitMeta {
  EmbeddingKind embedding = EmbeddingKind::Identity;
  /// Feature-map repetitions (E1) or Trotter steps (E2).
  unsigned repetitions = 0;
  double scale = 0.0;
  std::uint64_t seed = 0;
  Entanglement entanglement = Entanglement::Linear;
  PairMap pair_map = PairMap::Product;

  bool operator==(const CircuitMeta&) const = default;
};

/// Ordered gate list on a fixed register. Gate order is execution order.
class Circuit {
 public:
  explicit Circuit(std::uint32_t n_qubits, CircuitMeta meta = {});

  /// Validates qubit indices, CX distinctness, and finite angles.
  void add(const Gate& g);

  [[nodiscard]] std::uint32_t n_qubits() const { return n_qubits_; }
  [[nodiscard]] const std::vector<Gate>& gates() const { return gates_; }
  [[nodiscard]] const CircuitMeta& meta() const { return meta_; }

  bool operator==(const Circuit&) const = default;

 private:
  std::uint32_t n_qubits_;
  CircuitMeta meta_;
  std::vector<Gate> gates_;
};

struct CircuitStats {
  std::size_t total_gates = 0;
  std::size_t two_qubit_gates = 0;
  std::size_t two_qubit_depth = 0;

  auto operator<=>(const CircuitStats&) const = default;
};

/// Totals plus as-soon-as-possible layering of two-qubit gates. Single-qubit
/// gates neither add depth nor block.
CircuitStats circuit_stats(const Circuit& c);

inline constexpr double kScalePi = std::numbers::pi;
inline constexpr double kScaleHalfPi = std::numbers::pi / 2.0;

/// ZZ feature map on n = x.size() qubits. Each repetition: H on every qubit,
/// RZ(2·scale·x_j), then for each entangled pair (j,k) the core
/// CX(j,k) RZ_k(θ_jk) CX(j,k) with θ_jk from `pair_map`. With linear entanglement the chain
/// pairs are emitted even edges first, then odd edges, so each repetition
/// layers into four two-qubit slices.
Circuit build_zz_feature_map(std::span<const double> x, unsigned reps, double scale,
                             Entanglement entanglement = Entanglement::Linear,
                             PairMap pair_map = PairMap::Product);

/// Trotterized 1D Heisenberg evolution on n = x.size() + 1 qubits. Feature e
/// drives chain edge (e, e+1). A seeded layer of RY rotations (angles uniform
/// in [0, 2π)) prepares the initial product state; each step then applies
/// RXX, RYY, RZZ with angle scale·x_e/steps on every edge, even edges first.
Circuit build_heisenberg_embedding(std::span<const double> x, unsigned steps, std::uint64_t seed,
                                   double scale = kScaleHalfPi);

/// Text form: header `qubits=N meta=<k=v;...>` then one gate per line
/// `KIND q0 [q1] [angle]`. Angles are written in shortest round-trip form.
void write_circuit(std::ostream& out, const Circuit& c);
Circuit read_circuit(std::istream& in);

}  // namespace pqk
