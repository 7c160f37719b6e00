#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pqk/kernel.hpp"
#include "pqk/linalg.hpp"
#include "pqk/svm.hpp"

namespace pqk {

/// Hyperparameter grid. Candidates are enumerated kernel-major, then C, then
/// γ; that order is also the tie-break order.
struct GridSpec {
  std::vector<KernelKind> kernels;
  std::vector<double> c_values;
  std::vector<Gamma> gammas;
  int degree = 3;
  double coef0 = 0.0;

  /// The full tuning grid: 4 kernels, 87 C values, 77 γ values.
  static GridSpec standard();

  [[nodiscard]] std::size_t size() const { return kernels.size() * c_values.size() * gammas.size(); }
};

/// Evenly spaced values first, first+step, ..., last, built from integer
/// multiples of `step_hundredths` / 100 so the count is exact.
std::vector<double> decimal_range(int first_hundredths, int last_hundredths, int step_hundredths);

struct Candidate {
  KernelSpec spec;
  double c = 1.0;
};

struct CandidateScore {
  Candidate candidate;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> fold_scores;
};

struct GridResult {
  std::vector<CandidateScore> scores;
  std::size_t best = 0;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  /// fold_of[i] is the CV fold of training row i.
  std::vector<std::size_t> fold_of;

  [[nodiscard]] const CandidateScore& best_score() const { return scores.at(best); }
};

/// Stratified fold assignment: each label's rows are shuffled with `seed`
/// and dealt round-robin. Depends only on (y, folds, seed).
std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t folds,
                                          std::uint64_t seed);

/// Largest usable fold count: `requested`, reduced to the minority label's
/// count (with a warning). Throws DataError below 2.
std::size_t feasible_folds(std::span<const int> y, std::size_t requested);

/// Mean weighted-F1 over stratified folds for every grid candidate.
GridResult grid_search(const Matrix& x, std::span<const int> y, const GridSpec& grid,
                       std::size_t folds, std::uint64_t seed, const SmoOptions& opts = {});

/// Test-set weighted-F1 of every candidate (grid order) when fitted on the
/// whole training set. Used to report the best-on-test alternative to CV
/// selection.
std::vector<double> holdout_scores(const Matrix& x_train, std::span<const int> y_train,
                                   const Matrix& x_test, std::span<const int> y_test,
                                   const GridSpec& grid, const SmoOptions& opts = {});

/// One row per candidate: kernel,C,gamma,mean_f1,std_f1,fold scores...
void write_grid_csv(std::ostream& out, const GridResult& r);

}  // namespace pqk
