#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pqk/circuit.hpp"

namespace pqk {

enum class PauliAxis : std::uint8_t { X, Y, Z };

/// Pauli string on up to 64 qubits as paired bitmasks: qubit j carries X if
/// only its x bit is set, Z if only its z bit is set, Y if both are set.
/// The string is Hermitian (Y means Y, not XZ); signs live in coefficients.
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  static PauliString identity() { return {}; }
  static PauliString single(std::uint32_t qubit, PauliAxis axis);
  /// Parses a dense label such as "IXYZ", qubit 0 first.
  static PauliString from_label(std::string_view label);

  [[nodiscard]] bool is_identity() const { return (x | z) == 0; }
  /// True when the string is diagonal in the computational basis (I/Z only).
  [[nodiscard]] bool is_diagonal() const { return x == 0; }
  [[nodiscard]] std::uint64_t support() const { return x | z; }
  [[nodiscard]] std::string label(std::uint32_t n_qubits) const;

  auto operator<=>(const PauliString&) const = default;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept {
    std::uint64_t h = p.x * 0x9e3779b97f4a7c15ULL;
    h ^= (p.z + 0x632be59bd9b4e019ULL) * 0xbf58476d1ce4e5b9ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Sparse real-weighted sum of Pauli strings.
class ObservableSum {
 public:
  struct Term {
    PauliString pauli;
    double coeff = 0.0;
  };

  ObservableSum() = default;
  ObservableSum(PauliString p, double coeff) { add(p, coeff); }

  /// Adds to an existing term or inserts a new one; zero results are removed.
  void add(PauliString p, double coeff);

  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] double coefficient(PauliString p) const;
  /// Σ c_i².
  [[nodiscard]] double weight_norm() const;

  /// Sort terms by Pauli key; gives a canonical order for output/comparison.
  void canonicalize();

 private:
  friend ObservableSum backpropagate_observable(const Circuit&, ObservableSum, double);
  std::vector<Term> terms_;
};

/// Heisenberg-picture evolution O -> G† O G through the circuit, last gate
/// first. After every gate application terms with |c| < threshold are dropped
/// and like terms are merged. Output terms are in canonical order.
ObservableSum backpropagate_observable(const Circuit& c, ObservableSum obs, double threshold);

/// ⟨0…0| O |0…0⟩: the sum of coefficients of I/Z-only strings.
double obp_expectation(const ObservableSum& obs);

/// Single-qubit ⟨P_q⟩ of the circuit output state via backpropagation.
double obp_pauli_expectation(const Circuit& c, std::uint32_t qubit, PauliAxis axis,
                             double threshold);

}  // namespace pqk
