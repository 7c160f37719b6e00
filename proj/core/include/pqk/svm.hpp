#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pqk/kernel.hpp"
#include "pqk/linalg.hpp"

namespace pqk {

struct SmoOptions {
  /// Stop once the maximal KKT violation gap m(α) - M(α) drops below tol.
  double tol = 1e-3;
  /// Iteration cap; 0 picks max(10^7, 100·n).
  std::size_t max_iter = 0;
};

/// Dual solution of min ½αᵀQα − eᵀα, 0 ≤ α ≤ C, yᵀα = 0, Q_ij = y_i y_j K_ij.
struct DualSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

/// SMO on a precomputed Gram matrix. The first working-set index is the
/// maximal violator; the partner is chosen by second-order gain.
DualSolution smo_solve(const Matrix& gram, std::span<const int> y, double c,
                       const SmoOptions& opts = {});

double dual_objective(const Matrix& gram, std::span<const int> y, std::span<const double> alpha);

/// Largest KKT violation of (α, b): for α=0 the margin shortfall 1 - y f,
/// for α=C the excess y f - 1, for free α the distance |y f - 1|.
double kkt_violation(const Matrix& gram, std::span<const int> y, std::span<const double> alpha,
                     double bias, double c);

struct SvmModel {
  KernelSpec spec;
  ResolvedKernel kernel;
  double c = 1.0;
  std::vector<std::size_t> support;
  /// α_i·y_i for each support index.
  std::vector<double> dual_coef;
  double bias = 0.0;
  Matrix support_vectors;
  std::string training_hash;
  std::size_t iterations = 0;
  bool converged = true;

  [[nodiscard]] std::size_t n_features() const { return support_vectors.cols(); }
  [[nodiscard]] double decision(std::span<const double> x) const;
};

/// Trains a binary SVM. y must be ±1 with both labels present, C > 0.
SvmModel smo_train(const Matrix& x, std::span<const int> y, const KernelSpec& spec, double c,
                   const SmoOptions& opts = {});

/// Builds a model from a dual solution on a precomputed Gram matrix.
SvmModel model_from_dual(const Matrix& x, std::span<const int> y, const KernelSpec& spec,
                         const ResolvedKernel& kernel, double c, const DualSolution& sol);

std::vector<double> decision_function(const SvmModel& m, const Matrix& x);
/// sign(f(x)); f = 0 maps to +1.
std::vector<int> predict(const SvmModel& m, const Matrix& x);

/// Per-label F1 averaged with label-support weights.
double weighted_f1(std::span<const int> y_true, std::span<const int> y_pred);

std::string training_hash(const Matrix& x, std::span<const int> y);

nlohmann::json to_json(const SvmModel& m);
SvmModel model_from_json(const nlohmann::json& j);

}  // namespace pqk
