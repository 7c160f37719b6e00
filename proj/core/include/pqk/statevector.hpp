#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "pqk/circuit.hpp"
#include "pqk/pauli.hpp"

namespace pqk {

inline constexpr std::uint32_t kDefaultStatevectorCap = 26;

/// Dense 2^n amplitude vector; qubit j is bit j of the basis index.
class StateVector {
 public:
  /// |0…0⟩ on n qubits.
  explicit StateVector(std::uint32_t n_qubits);

  [[nodiscard]] std::uint32_t n_qubits() const { return n_qubits_; }
  [[nodiscard]] const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
  [[nodiscard]] double norm_squared() const;

  void apply(const Gate& g);

 private:
  std::uint32_t n_qubits_;
  std::vector<std::complex<double>> amps_;
};

/// Applies `c` to |0…0⟩. Throws BackendInfeasible above `qubit_cap`.
StateVector statevector_simulate(const Circuit& c,
                                 std::uint32_t qubit_cap = kDefaultStatevectorCap);

/// Exact ⟨ψ|P_q|ψ⟩.
double pauli_expectation(const StateVector& s, std::uint32_t qubit, PauliAxis axis);

/// (⟨X_q⟩, ⟨Y_q⟩, ⟨Z_q⟩) for every qubit in one pass, flattened X0,Y0,Z0,X1,…
std::vector<double> bloch_vectors(const StateVector& s);

/// Mean of `shots` ±1 outcomes with P(+1) = (1 + exact)/2, drawn from a
/// generator seeded with `seed`.
double sample_expectation(double exact, std::uint64_t shots, std::uint64_t seed);
double sample_expectation(const StateVector& s, std::uint32_t qubit, PauliAxis axis,
                          std::uint64_t shots, std::uint64_t seed);

}  // namespace pqk
