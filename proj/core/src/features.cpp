#include "pqk/features.hpp"

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "pqk/csv.hpp"
#include "pqk/errors.hpp"
#include "pqk/hashing.hpp"
#include "pqk/pauli.hpp"

namespace pqk {

std::uint32_t EmbeddingConfig::n_qubits(std::size_t n_features) const {
  return static_cast<std::uint32_t>(kind == EmbeddingKind::Heisenberg ? n_features + 1
                                                                      : n_features);
}

Circuit EmbeddingConfig::build(std::span<const double> x) const {
  switch (kind) {
    case EmbeddingKind::Identity:
      return Circuit(static_cast<std::uint32_t>(x.size()), CircuitMeta{});
    case EmbeddingKind::ZZFeatureMap:
      return build_zz_feature_map(x, repetitions, scale, entanglement, pair_map);
    case EmbeddingKind::Heisenberg:
      return build_heisenberg_embedding(x, repetitions, seed, scale);
  }
  throw std::logic_error("unknown embedding kind");
}

std::string EmbeddingConfig::descriptor() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind != EmbeddingKind::Identity)
    os << ";reps=" << repetitions << ";scale=" << csv::format_double(scale);
  if (kind == EmbeddingKind::Heisenberg) os << ";seed=" << seed;
  if (kind == EmbeddingKind::ZZFeatureMap) {
    os << ";entanglement=" << to_string(entanglement);
    if (pair_map != PairMap::Product) os << ";pairmap=" << to_string(pair_map);
  }
  return os.str();
}

Backend Backend::parse(std::string_view text) {
  Backend b;
  auto parse_shots = [](std::string_view v) {
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc{} || ptr != v.data() + v.size() || n == 0)
      throw ConfigError("invalid shot count '" + std::string(v) + "'");
    return n;
  };
  if (text == "exact") return b;
  if (text.starts_with("shots:")) {
    b.shots = parse_shots(text.substr(6));
    return b;
  }
  if (text.starts_with("obp:")) {
    b.kind = Kind::Obp;
    auto rest = text.substr(4);
    const auto plus = rest.find('+');
    const auto thr = rest.substr(0, plus);
    try {
      b.threshold = csv::parse_double(thr);
    } catch (const DataError&) {
      throw ConfigError("invalid obp threshold '" + std::string(thr) + "'");
    }
    if (!(b.threshold >= 0.0)) throw ConfigError("obp threshold must be >= 0");
    if (plus != std::string_view::npos) {
      auto extra = rest.substr(plus + 1);
      if (!extra.starts_with("shots:")) throw ConfigError("expected '+shots:<n>' after obp threshold");
      b.shots = parse_shots(extra.substr(6));
    }
    return b;
  }
  throw ConfigError("unknown backend '" + std::string(text) +
                    "' (expected exact, shots:<n>, obp:<threshold>)");
}

std::string Backend::descriptor() const {
  std::ostringstream os;
  if (kind == Kind::Obp)
    os << "obp:" << csv::format_double(threshold);
  else
    os << "exact";
  if (shots > 0) os << "+shots:" << shots << ";seed=" << shot_seed;
  return os.str();
}

void Backend::check_admissible(std::uint32_t n_qubits) const {
  if (kind == Kind::Exact && n_qubits > statevector_cap)
    throw BackendInfeasible(std::to_string(n_qubits) +
                            " qubits exceed the statevector cap of " +
                            std::to_string(statevector_cap) + "; use the obp backend");
  if (kind == Kind::Obp && n_qubits > 64)
    throw BackendInfeasible("Pauli backpropagation supports at most 64 qubits");
}

FeatureCache::FeatureCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string FeatureCache::key(std::span<const double> sample, const EmbeddingConfig& embedding,
                              const Backend& backend) {
  Fnv1a h;
  h.update(std::uint64_t{sample.size()});
  for (double v : sample) h.update(v);
  h.update(embedding.descriptor());
  h.update(std::string_view("|"));
  h.update(backend.descriptor());
  return h.hex();
}

std::optional<std::vector<double>> FeatureCache::load(const std::string& key,
                                                      std::size_t expected_width) const {
  std::ifstream in(dir_ / (key + ".txt"));
  if (!in) return std::nullopt;
  std::vector<double> values;
  values.reserve(expected_width);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      values.push_back(csv::parse_double(line));
    } catch (const DataError&) {
      return std::nullopt;
    }
  }
  if (values.size() != expected_width) return std::nullopt;
  return values;
}

void FeatureCache::store(const std::string& key, std::span<const double> values) {
  std::lock_guard lock(write_mutex_);
  const auto final_path = dir_ / (key + ".txt");
  const auto tmp_path = dir_ / (key + ".tmp");
  {
    std::ofstream out(tmp_path, std::ios::trunc);
    for (double v : values) out << csv::format_double(v) << '\n';
  }
  std::filesystem::rename(tmp_path, final_path);
}

std::vector<double> project_sample(const Circuit& c, const Backend& backend,
                                   std::uint64_t sample_seed) {
  const std::uint32_t n = c.n_qubits();
  backend.check_admissible(n);
  std::vector<double> out(3 * static_cast<std::size_t>(n));

  if (backend.kind == Backend::Kind::Exact) {
    out = bloch_vectors(statevector_simulate(c, backend.statevector_cap));
  } else {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, out.size()),
                      [&](const tbb::blocked_range<std::size_t>& r) {
                        for (std::size_t k = r.begin(); k != r.end(); ++k) {
                          const auto q = static_cast<std::uint32_t>(k / 3);
                          const auto axis = static_cast<PauliAxis>(k % 3);
                          out[k] = obp_pauli_expectation(c, q, axis, backend.threshold);
                        }
                      });
    // Truncation can push a triple outside the Bloch ball; pull it back radially.
    for (std::size_t q = 0; q < n; ++q) {
      double* r = out.data() + 3 * q;
      const double norm = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
      if (norm > 1.0)
        for (int a = 0; a < 3; ++a) r[a] /= norm;
    }
  }

  if (backend.shots > 0) {
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = sample_expectation(out[k], backend.shots, mix_seed(sample_seed, k));
  }
  return out;
}

Matrix project_features(const Matrix& samples, const EmbeddingConfig& embedding,
                        const Backend& backend, FeatureCache* cache) {
  const std::uint32_t n_qubits = embedding.n_qubits(samples.cols());
  backend.check_admissible(n_qubits);
  const std::size_t width = 3 * static_cast<std::size_t>(n_qubits);

  // Distinct rows are simulated once.
  std::vector<std::size_t> unique_rows;
  std::vector<std::size_t> source(samples.rows());
  {
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < samples.rows(); ++i) {
      auto row = samples.row(i);
      std::string bytes(reinterpret_cast<const char*>(row.data()), row.size_bytes());
      auto [it, inserted] = seen.emplace(std::move(bytes), unique_rows.size());
      if (inserted) unique_rows.push_back(i);
      source[i] = it->second;
    }
  }

  std::vector<std::vector<double>> results(unique_rows.size());
  tbb::parallel_for(std::size_t{0}, unique_rows.size(), [&](std::size_t u) {
    auto row = samples.row(unique_rows[u]);
    std::string key;
    if (cache) {
      key = FeatureCache::key(row, embedding, backend);
      if (auto hit = cache->load(key, width)) {
        results[u] = std::move(*hit);
        return;
      }
    }
    Fnv1a h;
    for (double v : row) h.update(v);
    const auto circuit = embedding.build(row);
    results[u] = project_sample(circuit, backend, mix_seed(backend.shot_seed, h.digest()));
    if (cache) cache->store(key, results[u]);
  });

  Matrix out(samples.rows(), width);
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    const auto& r = results[source[i]];
    std::copy(r.begin(), r.end(), out.row(i).begin());
  }
  return out;
}

std::vector<std::string> feature_column_names(std::uint32_t n_qubits) {
  std::vector<std::string> names;
  names.reserve(3 * static_cast<std::size_t>(n_qubits));
  for (std::uint32_t q = 0; q < n_qubits; ++q)
    for (const char* axis : {"X", "Y", "Z"}) names.push_back("q" + std::to_string(q) + "_" + axis);
  return names;
}

}  // namespace pqk
