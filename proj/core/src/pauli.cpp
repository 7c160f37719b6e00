#include "pqk/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "pqk/errors.hpp"

namespace pqk {

PauliString PauliString::single(std::uint32_t qubit, PauliAxis axis) {
  if (qubit >= 64) throw std::out_of_range("Pauli strings support at most 64 qubits");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (axis) {
    case PauliAxis::X: return {bit, 0};
    case PauliAxis::Y: return {bit, bit};
    case PauliAxis::Z: return {0, bit};
  }
  return {};
}

PauliString PauliString::from_label(std::string_view label) {
  if (label.size() > 64) throw std::out_of_range("Pauli strings support at most 64 qubits");
  PauliString p;
  for (std::size_t q = 0; q < label.size(); ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    switch (label[q]) {
      case 'I': break;
      case 'X': p.x |= bit; break;
      case 'Y': p.x |= bit; p.z |= bit; break;
      case 'Z': p.z |= bit; break;
      default: throw std::invalid_argument("bad Pauli label character");
    }
  }
  return p;
}

std::string PauliString::label(std::uint32_t n_qubits) const {
  std::string s(n_qubits, 'I');
  for (std::uint32_t q = 0; q < n_qubits; ++q) {
    const bool xb = (x >> q) & 1U;
    const bool zb = (z >> q) & 1U;
    s[q] = xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  return s;
}

void ObservableSum::add(PauliString p, double coeff) {
  auto it = std::find_if(terms_.begin(), terms_.end(),
                         [&](const Term& t) { return t.pauli == p; });
  if (it == terms_.end()) {
    if (coeff != 0.0) terms_.push_back({p, coeff});
    return;
  }
  it->coeff += coeff;
  if (it->coeff == 0.0) terms_.erase(it);
}

double ObservableSum::coefficient(PauliString p) const {
  for (const auto& t : terms_)
    if (t.pauli == p) return t.coeff;
  return 0.0;
}

double ObservableSum::weight_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.coeff * t.coeff;
  return s;
}

void ObservableSum::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.pauli < b.pauli; });
}

namespace {

using Terms = std::vector<ObservableSum::Term>;

inline bool bit(std::uint64_t m, std::uint32_t q) { return (m >> q) & 1U; }

void apply_h(Terms& terms, std::uint32_t q) {
  const std::uint64_t m = std::uint64_t{1} << q;
  for (auto& t : terms) {
    const bool xb = t.pauli.x & m;
    const bool zb = t.pauli.z & m;
    if (xb && zb) {
      t.coeff = -t.coeff;  // H Y H = -Y
    } else if (xb != zb) {
      t.pauli.x ^= m;
      t.pauli.z ^= m;
    }
  }
}

void apply_cx(Terms& terms, std::uint32_t c, std::uint32_t tq) {
  const std::uint64_t mc = std::uint64_t{1} << c;
  const std::uint64_t mt = std::uint64_t{1} << tq;
  for (auto& t : terms) {
    const bool xc = bit(t.pauli.x, c);
    const bool zc = bit(t.pauli.z, c);
    const bool xt = bit(t.pauli.x, tq);
    const bool zt = bit(t.pauli.z, tq);
    if (xc && zt && !(xt ^ zc)) t.coeff = -t.coeff;
    if (xc) t.pauli.x ^= mt;
    if (zt) t.pauli.z ^= mc;
  }
}

// For U = exp(-iθP/2) and Q anticommuting with P on qubit q:
//   U† Q U = cos θ · Q + sin θ · (-i Q P)
// `branch` returns the Pauli -iQP together with its sign.
struct Branch {
  PauliString pauli;
  double sign;
};

bool anticommutes(GateKind axis, const PauliString& p, std::uint64_t m) {
  const bool xb = p.x & m;
  const bool zb = p.z & m;
  switch (axis) {
    case GateKind::RZ: return xb;
    case GateKind::RX: return zb;
    case GateKind::RY: return xb != zb;
    default: return false;
  }
}

Branch branch(GateKind axis, PauliString p, std::uint64_t m) {
  const bool xb = p.x & m;
  const bool zb = p.z & m;
  switch (axis) {
    case GateKind::RZ:  // X -> -Y, Y -> +X
      p.z ^= m;
      return {p, zb ? 1.0 : -1.0};
    case GateKind::RX:  // Z -> +Y, Y -> -Z
      p.x ^= m;
      return {p, xb ? -1.0 : 1.0};
    case GateKind::RY:  // X -> +Z, Z -> -X
      p.x ^= m;
      p.z ^= m;
      return {p, xb ? 1.0 : -1.0};
    default: break;
  }
  throw std::logic_error("branch on non-rotation gate");
}

void apply_rotation(Terms& terms, GateKind axis, std::uint32_t q, double theta) {
  const std::uint64_t m = std::uint64_t{1} << q;
  const double c = std::cos(theta);
  const double s = std::sin(theta);

  std::vector<ObservableSum::Term> branches;
  for (auto& t : terms) {
    if (!anticommutes(axis, t.pauli, m)) continue;
    if (s != 0.0) {
      auto [p, sign] = branch(axis, t.pauli, m);
      branches.push_back({p, sign * s * t.coeff});
    }
    t.coeff *= c;
  }
  if (branches.empty()) return;

  std::unordered_map<PauliString, std::size_t, PauliStringHash> index;
  index.reserve(terms.size() + branches.size());
  for (std::size_t i = 0; i < terms.size(); ++i) index.emplace(terms[i].pauli, i);
  for (const auto& b : branches) {
    auto [it, inserted] = index.emplace(b.pauli, terms.size());
    if (inserted)
      terms.push_back(b);
    else
      terms[it->second].coeff += b.coeff;
  }
}

void truncate(Terms& terms, double threshold) {
  std::erase_if(terms, [threshold](const ObservableSum::Term& t) {
    return t.coeff == 0.0 || std::abs(t.coeff) < threshold;
  });
}

}  // namespace

ObservableSum backpropagate_observable(const Circuit& c, ObservableSum obs, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("truncation threshold must be >= 0");
  if (c.n_qubits() > 64) throw BackendInfeasible("Pauli backpropagation supports at most 64 qubits");
  const std::uint64_t reg =
      c.n_qubits() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << c.n_qubits()) - 1;
  for (const auto& t : obs.terms_)
    if (t.pauli.support() & ~reg)
      throw std::invalid_argument("observable acts outside the circuit register");

  Terms& terms = obs.terms_;
  truncate(terms, threshold);

  const auto& gates = c.gates();
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    const Gate& g = *it;
    std::uint64_t support = 0;
    for (const auto& t : terms) support |= t.pauli.support();
    const std::uint64_t touched =
        (std::uint64_t{1} << g.qubits[0]) | (g.is_two_qubit() ? std::uint64_t{1} << g.qubits[1] : 0);
    if ((support & touched) == 0) continue;

    switch (g.kind) {
      case GateKind::H: apply_h(terms, g.qubits[0]); break;
      case GateKind::CX: apply_cx(terms, g.qubits[0], g.qubits[1]); break;
      case GateKind::RX:
      case GateKind::RY:
      case GateKind::RZ: apply_rotation(terms, g.kind, g.qubits[0], g.angle); break;
    }
    truncate(terms, threshold);
  }
  obs.canonicalize();
  return obs;
}

double obp_expectation(const ObservableSum& obs) {
  double e = 0.0;
  for (const auto& t : obs.terms())
    if (t.pauli.is_diagonal()) e += t.coeff;
  return e;
}

double obp_pauli_expectation(const Circuit& c, std::uint32_t qubit, PauliAxis axis,
                             double threshold) {
  if (qubit >= c.n_qubits()) throw std::out_of_range("qubit index exceeds register");
  return obp_expectation(
      backpropagate_observable(c, ObservableSum(PauliString::single(qubit, axis), 1.0), threshold));
}

}  // namespace pqk
