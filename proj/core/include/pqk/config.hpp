#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "pqk/features.hpp"
#include "pqk/grid_search.hpp"
#include "pqk/kernel.hpp"

namespace pqk {

enum class FeatureOrder { Natural, Correlation };
std::string_view to_string(FeatureOrder o);
FeatureOrder parse_feature_order(std::string_view text);

/// Which pipelines an experiment runs.
enum class Arms { Both, Original, Pqk };
std::string_view to_string(Arms a);

struct Seeds {
  std::uint64_t split = 0;
  std::uint64_t cv = 0;
  std::uint64_t embedding = 0;
  std::uint64_t shots = 0;
};

struct ScreenConfig {
  KernelSpec kernel{KernelKind::Rbf, Gamma::scale(), 3, 0.0};
  double lambda = 1.0;
  /// Keep only the first `positions` one-hot position blocks; 0 keeps all.
  std::size_t positions = 0;
};

/// Parsed experiment configuration.
///
/// INI layout (all seeds are required):
///
///     [data]        path
///     [embedding]   kind = e1|e2|identity, reps, scale = pi|pi2|<radians>,
///                   entanglement = linear|full, pair_map = product|shifted
///     [backend]     name = exact|shots:<n>|obp:<t>[+shots:<n>], statevector_cap,
///                   cache_dir
///     [experiment]  splits, train_fraction, folds, order = natural|correlation,
///                   arms = both|original|pqk, stratify = false|true
///     [grid]        preset = standard|custom, kernels, c, gamma, degree, coef0
///     [screen]      kernel, gamma, lambda, positions
///     [seeds]       split, cv, embedding, shots
struct ExperimentConfig {
  std::filesystem::path dataset;
  EmbeddingConfig embedding;
  Backend backend;
  std::optional<std::filesystem::path> cache_dir;
  std::size_t n_splits = 10;
  double train_fraction = 0.7;
  std::size_t folds = 10;
  FeatureOrder order = FeatureOrder::Natural;
  Arms arms = Arms::Both;
  /// Keep each label's train/test proportion in every split.
  bool stratify = false;
  GridSpec grid = GridSpec::standard();
  ScreenConfig screen;
  Seeds seeds;

  /// Canonical text of every setting; hashed into report provenance.
  [[nodiscard]] std::string canonical() const;
  [[nodiscard]] std::string hash() const;
};

/// Throws ConfigError on unknown sections/keys, bad values or missing seeds.
/// A relative dataset path is resolved against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// "pi", "pi2" (π/2) or a number of radians.
double parse_scale(std::string_view text);

}  // namespace pqk
