#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pqk/circuit.hpp"
#include "pqk/linalg.hpp"
#include "pqk/statevector.hpp"

namespace pqk {

/// Which embedding circuit to build for each sample.
struct EmbeddingConfig {
  EmbeddingKind kind = EmbeddingKind::ZZFeatureMap;
  /// E1 repetitions or E2 Trotter steps.
  unsigned repetitions = 8;
  double scale = kScaleHalfPi;
  /// Seed of the E2 initial rotation layer; ignored by E1.
  std::uint64_t seed = 0;
  Entanglement entanglement = Entanglement::Linear;
  PairMap pair_map = PairMap::Product;

  /// E1 and identity use one qubit per feature, E2 one more.
  [[nodiscard]] std::uint32_t n_qubits(std::size_t n_features) const;
  [[nodiscard]] Circuit build(std::span<const double> x) const;
  /// Stable text form used in cache keys and report provenance.
  [[nodiscard]] std::string descriptor() const;
};

/// Expectation-value engine plus its knobs.
struct Backend {
  enum class Kind { Exact, Obp };

  Kind kind = Kind::Exact;
  /// Shot count for sampled estimates; 0 means exact (noiseless) values.
  std::uint64_t shots = 0;
  double threshold = 0.0;
  std::uint64_t shot_seed = 0;
  std::uint32_t statevector_cap = kDefaultStatevectorCap;

  /// "exact", "shots:<n>", "obp:<threshold>", or "obp:<threshold>+shots:<n>".
  static Backend parse(std::string_view text);
  [[nodiscard]] std::string descriptor() const;

  /// Throws BackendInfeasible when this backend cannot simulate n qubits.
  void check_admissible(std::uint32_t n_qubits) const;
};

/// On-disk cache of per-sample projected features, one file per key. Reads
/// may run concurrently; writes are serialized and land via rename.
class FeatureCache {
 public:
  explicit FeatureCache(std::filesystem::path dir);

  [[nodiscard]] static std::string key(std::span<const double> sample,
                                       const EmbeddingConfig& embedding, const Backend& backend);

  [[nodiscard]] std::optional<std::vector<double>> load(const std::string& key,
                                                        std::size_t expected_width) const;
  void store(const std::string& key, std::span<const double> values);

  [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::mutex write_mutex_;
};

/// 3 expectations (X, Y, Z) per qubit of the circuit's output state. An OBP
/// triple whose norm exceeds 1 is rescaled onto the unit sphere.
std::vector<double> project_sample(const Circuit& c, const Backend& backend,
                                   std::uint64_t sample_seed);

/// Projected 1-RDM features: row i holds (⟨X_j⟩, ⟨Y_j⟩, ⟨Z_j⟩) for every
/// qubit j of sample i's embedding circuit. Identical input rows yield
/// identical output rows.
Matrix project_features(const Matrix& samples, const EmbeddingConfig& embedding,
                        const Backend& backend, FeatureCache* cache = nullptr);

/// Column names q{j}_{X|Y|Z}.
std::vector<std::string> feature_column_names(std::uint32_t n_qubits);

}  // namespace pqk
