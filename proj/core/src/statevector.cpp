#include "pqk/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pqk/errors.hpp"

namespace pqk {

using cplx = std::complex<double>;

StateVector::StateVector(std::uint32_t n_qubits)
    : n_qubits_(n_qubits), amps_(std::size_t{1} << n_qubits, cplx{0.0, 0.0}) {
  amps_[0] = 1.0;
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

namespace {

// Applies the 2x2 unitary [[u00,u01],[u10,u11]] to qubit q.
void apply_1q(std::vector<cplx>& amps, std::uint32_t q, cplx u00, cplx u01, cplx u10, cplx u11) {
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t dim = amps.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = amps[i];
      const cplx a1 = amps[i + stride];
      amps[i] = u00 * a0 + u01 * a1;
      amps[i + stride] = u10 * a0 + u11 * a1;
    }
  }
}

}  // namespace

void StateVector::apply(const Gate& g) {
  const std::uint32_t q = g.qubits[0];
  if (q >= n_qubits_ || (g.is_two_qubit() && g.qubits[1] >= n_qubits_))
    throw std::out_of_range("gate acts outside the state register");
  const double c = std::cos(g.angle / 2.0);
  const double s = std::sin(g.angle / 2.0);
  const cplx i{0.0, 1.0};
  switch (g.kind) {
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      apply_1q(amps_, q, r, r, r, -r);
      break;
    }
    case GateKind::RX: apply_1q(amps_, q, c, -i * s, -i * s, c); break;
    case GateKind::RY: apply_1q(amps_, q, c, -s, s, c); break;
    case GateKind::RZ: apply_1q(amps_, q, c - i * s, 0.0, 0.0, c + i * s); break;
    case GateKind::CX: {
      const std::size_t cm = std::size_t{1} << g.qubits[0];
      const std::size_t tm = std::size_t{1} << g.qubits[1];
      for (std::size_t k = 0; k < amps_.size(); ++k)
        if ((k & cm) && !(k & tm)) std::swap(amps_[k], amps_[k | tm]);
      break;
    }
  }
}

StateVector statevector_simulate(const Circuit& c, std::uint32_t qubit_cap) {
  if (c.n_qubits() > qubit_cap)
    throw BackendInfeasible("circuit has " + std::to_string(c.n_qubits()) +
                            " qubits; the statevector backend is capped at " +
                            std::to_string(qubit_cap) + " (use the obp backend instead)");
  StateVector s(c.n_qubits());
  for (const auto& g : c.gates()) s.apply(g);
  return s;
}

double pauli_expectation(const StateVector& s, std::uint32_t qubit, PauliAxis axis) {
  if (qubit >= s.n_qubits()) throw std::out_of_range("qubit index exceeds register");
  const auto& a = s.amplitudes();
  const std::size_t m = std::size_t{1} << qubit;
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k & m) continue;
    const cplx a0 = a[k];
    const cplx a1 = a[k | m];
    switch (axis) {
      case PauliAxis::X: acc += 2.0 * (std::conj(a0) * a1).real(); break;
      case PauliAxis::Y: acc += 2.0 * (std::conj(a0) * a1).imag(); break;
      case PauliAxis::Z: acc += std::norm(a0) - std::norm(a1); break;
    }
  }
  return acc;
}

std::vector<double> bloch_vectors(const StateVector& s) {
  std::vector<double> out(3 * static_cast<std::size_t>(s.n_qubits()), 0.0);
  const auto& a = s.amplitudes();
  for (std::uint32_t q = 0; q < s.n_qubits(); ++q) {
    const std::size_t m = std::size_t{1} << q;
    double x = 0.0, y = 0.0, z = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (k & m) continue;
      const cplx p = std::conj(a[k]) * a[k | m];
      x += p.real();
      y += p.imag();
      z += std::norm(a[k]) - std::norm(a[k | m]);
    }
    out[3 * q] = 2.0 * x;
    out[3 * q + 1] = 2.0 * y;
    out[3 * q + 2] = z;
  }
  return out;
}

double sample_expectation(double exact, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  const double p = std::clamp((1.0 + exact) / 2.0, 0.0, 1.0);
  std::mt19937_64 rng(seed);
  std::binomial_distribution<std::uint64_t> dist(shots, p);
  const auto plus = dist(rng);
  return (2.0 * static_cast<double>(plus) - static_cast<double>(shots)) / static_cast<double>(shots);
}

double sample_expectation(const StateVector& s, std::uint32_t qubit, PauliAxis axis,
                          std::uint64_t shots, std::uint64_t seed) {
  return sample_expectation(pauli_expectation(s, qubit, axis), shots, seed);
}

}  // namespace pqk
