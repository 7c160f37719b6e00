#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pqk/config.hpp"
#include "pqk/grid_search.hpp"
#include "pqk/motif_data.hpp"
#include "pqk/splits.hpp"

namespace pqk {

enum class Arm { Original, Pqk };
std::string_view to_string(Arm a);

/// One arm of one split: CV-selected model refitted on the training rows and
/// scored once on the test rows.
struct ArmOutcome {
  CandidateScore chosen;
  std::size_t cv_folds = 0;
  double test_f1 = 0.0;
  /// Best test F1 over all candidates (selection on test, reported only).
  double best_test_f1 = 0.0;
  /// Predictions aligned with Split::test.
  std::vector<int> predictions;
};

struct SplitOutcome {
  std::optional<ArmOutcome> original;
  std::optional<ArmOutcome> pqk;
  /// Column order fed to the embedding (identity for natural order).
  std::vector<std::size_t> feature_order;
  /// Stratified CV fold of each training row; shared by both arms.
  std::vector<std::size_t> fold_of;
};

struct ExperimentResult {
  ExperimentConfig config;
  EncodedDataset data;
  SplitPlan plan;
  std::vector<SplitOutcome> outcomes;
  std::uint32_t n_qubits = 0;
};

using Progress = std::function<void(const std::string&)>;

/// Runs the split protocol on an encoded dataset. The backend is checked
/// against the qubit count before any simulation starts.
ExperimentResult run_experiment(const ExperimentConfig& cfg, EncodedDataset data,
                                const Progress& progress = {});

/// Loads, encodes and runs the dataset named by cfg.dataset.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const Progress& progress = {});

/// Projected features of `bits` under cfg's embedding and backend (with the
/// configured feature cache, if any).
Matrix embed_features(const Matrix& bits, const ExperimentConfig& cfg);

struct ScreenPoint {
  double lambda = 0.0;
  double g_cq = 0.0;
  double s_c = 0.0;
  double s_q = 0.0;
};

struct ScreenReport {
  std::size_t n = 0;
  double sqrt_n = 0.0;
  std::string kernel;
  ScreenPoint at;
  std::vector<ScreenPoint> sweep;
  bool separation = false;
  bool complexity_gap = false;
  std::string verdict;
};

/// g_cq must reach half of √N to count as "on the order of √N"; s_c must
/// reach a quarter of √N with s_q below it.
inline constexpr double kSeparationRatio = 0.5;
inline constexpr double kComplexityRatio = 0.25;

/// Kernel-geometry screening of classical features `xc` against projected
/// features `xq` for the same N training samples.
ScreenReport screen_advantage(const Matrix& xc, const Matrix& xq, std::span<const int> y,
                              const KernelSpec& kernel, double lambda,
                              std::span<const double> sweep = {});

/// Default λ sweep.
std::vector<double> default_lambda_sweep();

/// Keeps the first `positions` one-hot position blocks of `bits`.
Matrix leading_positions(const Matrix& bits, const EncodingLayout& layout, std::size_t positions);

}  // namespace pqk
