#include "pqk/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "pqk/csv.hpp"
#include "pqk/errors.hpp"

namespace pqk {

std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CX: return "CX";
  }
  return "?";
}

std::string_view to_string(EmbeddingKind k) {
  switch (k) {
    case EmbeddingKind::Identity: return "identity";
    case EmbeddingKind::ZZFeatureMap: return "e1";
    case EmbeddingKind::Heisenberg: return "e2";
  }
  return "?";
}

std::string_view to_string(Entanglement e) {
  return e == Entanglement::Linear ? "linear" : "full";
}

std::string_view to_string(PairMap p) { return p == PairMap::Product ? "product" : "shifted"; }

Circuit::Circuit(std::uint32_t n_qubits, CircuitMeta meta) : n_qubits_(n_qubits), meta_(meta) {}

void Circuit::add(const Gate& g) {
  if (g.qubits[0] >= n_qubits_ || (g.is_two_qubit() && g.qubits[1] >= n_qubits_))
    throw std::out_of_range("gate qubit index exceeds register of " + std::to_string(n_qubits_));
  if (g.is_two_qubit() && g.qubits[0] == g.qubits[1])
    throw std::invalid_argument("CX control and target must differ");
  if (g.is_rotation() && !std::isfinite(g.angle))
    throw std::invalid_argument("rotation angle must be finite");
  gates_.push_back(g);
}

CircuitStats circuit_stats(const Circuit& c) {
  CircuitStats s;
  s.total_gates = c.gates().size();
  std::vector<std::size_t> level(c.n_qubits(), 0);
  for (const auto& g : c.gates()) {
    if (!g.is_two_qubit()) continue;
    ++s.two_qubit_gates;
    const auto a = g.qubits[0];
    const auto b = g.qubits[1];
    const std::size_t l = std::max(level[a], level[b]) + 1;
    level[a] = level[b] = l;
    s.two_qubit_depth = std::max(s.two_qubit_depth, l);
  }
  return s;
}

namespace {

// Even chain edges first, then odd ones.
std::vector<std::uint32_t> layered_chain_edges(std::uint32_t n_edges) {
  std::vector<std::uint32_t> edges;
  for (std::uint32_t e = 0; e < n_edges; e += 2) edges.push_back(e);
  for (std::uint32_t e = 1; e < n_edges; e += 2) edges.push_back(e);
  return edges;
}

void check_features(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) throw DataError("embedding input contains a non-finite value");
}

// exp(-iθ/2 Z_a Z_b)
void add_zz_core(Circuit& c, std::uint32_t a, std::uint32_t b, double theta) {
  c.add(Gate::cx(a, b));
  c.add(Gate::rz(b, theta));
  c.add(Gate::cx(a, b));
}

}  // namespace

Circuit build_zz_feature_map(std::span<const double> x, unsigned reps, double scale,
                             Entanglement entanglement, PairMap pair_map) {
  if (x.size() < 2) throw std::invalid_argument("ZZ feature map needs at least two features");
  if (reps < 1) throw std::invalid_argument("ZZ feature map needs at least one repetition");
  check_features(x);

  const auto n = static_cast<std::uint32_t>(x.size());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  if (entanglement == Entanglement::Linear) {
    for (auto e : layered_chain_edges(n - 1)) pairs.emplace_back(e, e + 1);
  } else {
    for (std::uint32_t j = 0; j < n; ++j)
      for (std::uint32_t k = j + 1; k < n; ++k) pairs.emplace_back(j, k);
  }

  auto pair_angle = [&](std::uint32_t j, std::uint32_t k) {
    if (pair_map == PairMap::Product) return 2.0 * scale * scale * x[j] * x[k];
    return 2.0 * (std::numbers::pi - scale * x[j]) * (std::numbers::pi - scale * x[k]);
  };

  Circuit c(n, CircuitMeta{EmbeddingKind::ZZFeatureMap, reps, scale, 0, entanglement, pair_map});
  for (unsigned r = 0; r < reps; ++r) {
    for (std::uint32_t q = 0; q < n; ++q) c.add(Gate::h(q));
    for (std::uint32_t q = 0; q < n; ++q) c.add(Gate::rz(q, 2.0 * scale * x[q]));
    for (auto [j, k] : pairs) add_zz_core(c, j, k, pair_angle(j, k));
  }
  return c;
}

Circuit build_heisenberg_embedding(std::span<const double> x, unsigned steps, std::uint64_t seed,
                                   double scale) {
  if (x.empty()) throw std::invalid_argument("Heisenberg embedding needs at least one feature");
  if (steps < 1) throw std::invalid_argument("Heisenberg embedding needs at least one step");
  check_features(x);

  const auto n = static_cast<std::uint32_t>(x.size() + 1);
  Circuit c(n, CircuitMeta{EmbeddingKind::Heisenberg, steps, scale, seed, Entanglement::Linear});

  // Explicit 53-bit mantissa draw so angles do not depend on the standard
  // library's distribution implementation.
  std::mt19937_64 rng(seed);
  for (std::uint32_t q = 0; q < n; ++q) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    c.add(Gate::ry(q, 2.0 * std::numbers::pi * u));
  }

  constexpr double kQuarterTurn = std::numbers::pi / 2.0;
  const auto edges = layered_chain_edges(n - 1);
  for (unsigned s = 0; s < steps; ++s) {
    for (auto e : edges) {
      const std::uint32_t a = e;
      const std::uint32_t b = e + 1;
      const double theta = scale * x[e] / static_cast<double>(steps);
      // RXX
      c.add(Gate::h(a));
      c.add(Gate::h(b));
      add_zz_core(c, a, b, theta);
      c.add(Gate::h(a));
      c.add(Gate::h(b));
      // RYY
      c.add(Gate::rx(a, kQuarterTurn));
      c.add(Gate::rx(b, kQuarterTurn));
      add_zz_core(c, a, b, theta);
      c.add(Gate::rx(a, -kQuarterTurn));
      c.add(Gate::rx(b, -kQuarterTurn));
      // RZZ
      add_zz_core(c, a, b, theta);
    }
  }
  return c;
}

void write_circuit(std::ostream& out, const Circuit& c) {
  const auto& m = c.meta();
  out << "qubits=" << c.n_qubits() << " meta=embedding=" << to_string(m.embedding)
      << ";reps=" << m.repetitions << ";scale=" << csv::format_double(m.scale)
      << ";seed=" << m.seed << ";entanglement=" << to_string(m.entanglement);
  if (m.pair_map != PairMap::Product) out << ";pairmap=" << to_string(m.pair_map);
  out << '\n';
  for (const auto& g : c.gates()) {
    out << to_string(g.kind) << ' ' << g.qubits[0];
    if (g.is_two_qubit()) out << ' ' << g.qubits[1];
    if (g.is_rotation()) out << ' ' << csv::format_double(g.angle);
    out << '\n';
  }
}

namespace {

CircuitMeta parse_meta(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw DataError("circuit meta entry without '=': " + item);
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  CircuitMeta m;
  const auto& e = kv["embedding"];
  if (e == "e1") m.embedding = EmbeddingKind::ZZFeatureMap;
  else if (e == "e2") m.embedding = EmbeddingKind::Heisenberg;
  else if (e == "identity" || e.empty()) m.embedding = EmbeddingKind::Identity;
  else throw DataError("unknown embedding in circuit meta: " + e);
  if (kv.contains("reps")) m.repetitions = static_cast<unsigned>(std::stoul(kv["reps"]));
  if (kv.contains("scale")) m.scale = csv::parse_double(kv["scale"]);
  if (kv.contains("seed")) m.seed = std::stoull(kv["seed"]);
  m.entanglement = kv["entanglement"] == "full" ? Entanglement::Full : Entanglement::Linear;
  m.pair_map = kv["pairmap"] == "shifted" ? PairMap::Shifted : PairMap::Product;
  return m;
}

}  // namespace

Circuit read_circuit(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("qubits="))
    throw DataError("circuit text must start with 'qubits=N'");
  std::istringstream header(line);
  std::string qtok, mtok;
  header >> qtok >> mtok;
  const auto n = static_cast<std::uint32_t>(std::stoul(qtok.substr(7)));
  CircuitMeta meta;
  if (mtok.starts_with("meta=")) meta = parse_meta(mtok.substr(5));
  Circuit c(n, meta);

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    Gate g;
    std::uint32_t q0 = 0, q1 = 0;
    if (!(ls >> q0)) throw DataError("line " + std::to_string(lineno) + ": missing qubit");
    std::string angle;
    if (kind == "H") {
      g = Gate::h(q0);
    } else if (kind == "CX") {
      if (!(ls >> q1)) throw DataError("line " + std::to_string(lineno) + ": CX needs two qubits");
      g = Gate::cx(q0, q1);
    } else if (kind == "RX" || kind == "RY" || kind == "RZ") {
      if (!(ls >> angle)) throw DataError("line " + std::to_string(lineno) + ": missing angle");
      const double theta = csv::parse_double(angle);
      g = kind == "RX" ? Gate::rx(q0, theta) : kind == "RY" ? Gate::ry(q0, theta) : Gate::rz(q0, theta);
    } else {
      throw DataError("line " + std::to_string(lineno) + ": unknown gate '" + kind + "'");
    }
    c.add(g);
  }
  return c;
}

}  // namespace pqk
