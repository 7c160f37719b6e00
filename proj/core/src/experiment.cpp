#include "pqk/experiment.hpp"

#include <tbb/parallel_for.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "pqk/errors.hpp"
#include "pqk/features.hpp"
#include "pqk/hashing.hpp"
#include "pqk/kernel.hpp"
#include "pqk/metrics.hpp"
#include "pqk/svm.hpp"

namespace pqk {

std::string_view to_string(Arm a) { return a == Arm::Original ? "original" : "pqk"; }

Matrix embed_features(const Matrix& bits, const ExperimentConfig& cfg) {
  std::optional<FeatureCache> cache;
  if (cfg.cache_dir) cache.emplace(*cfg.cache_dir);
  return project_features(bits, cfg.embedding, cfg.backend, cache ? &*cache : nullptr);
}

namespace {

std::vector<int> pick(std::span<const int> y, std::span<const std::size_t> idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(y[i]);
  return out;
}

ArmOutcome run_arm(const Matrix& x, std::span<const int> y, const Split& split,
                   const ExperimentConfig& cfg, std::uint64_t cv_seed,
                   std::vector<std::size_t>* fold_of) {
  const Matrix x_tr = x.select_rows(split.train);
  const Matrix x_te = x.select_rows(split.test);
  const auto y_tr = pick(y, split.train);
  const auto y_te = pick(y, split.test);

  auto grid = grid_search(x_tr, y_tr, cfg.grid, cfg.folds, cv_seed);
  if (fold_of) *fold_of = grid.fold_of;

  ArmOutcome out;
  out.chosen = grid.best_score();
  out.cv_folds = grid.folds;
  const auto model = smo_train(x_tr, y_tr, out.chosen.candidate.spec, out.chosen.candidate.c);
  out.predictions = predict(model, x_te);
  out.test_f1 = weighted_f1(y_te, out.predictions);
  const auto holdout = holdout_scores(x_tr, y_tr, x_te, y_te, cfg.grid);
  out.best_test_f1 = *std::max_element(holdout.begin(), holdout.end());
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, EncodedDataset data,
                                const Progress& progress) {
  ExperimentResult res;
  res.config = cfg;
  const Matrix x = data.bit_matrix();
  const auto y = data.labels();
  const bool run_original = cfg.arms != Arms::Pqk;
  const bool run_pqk = cfg.arms != Arms::Original;

  res.n_qubits = cfg.embedding.n_qubits(x.cols());
  if (run_pqk) cfg.backend.check_admissible(res.n_qubits);
  res.plan = cfg.stratify ? make_stratified_splits(y, cfg.n_splits, cfg.train_fraction, cfg.seeds.split)
                          : make_splits(x.rows(), cfg.n_splits, cfg.train_fraction, cfg.seeds.split);

  std::mutex log_mutex;
  auto log = [&](const std::string& msg) {
    if (!progress) return;
    std::lock_guard lock(log_mutex);
    progress(msg);
  };

  std::optional<Matrix> shared_features;
  if (run_pqk && cfg.order == FeatureOrder::Natural) {
    log("projecting " + std::to_string(x.rows()) + " samples on " + std::to_string(res.n_qubits) +
        " qubits");
    shared_features = embed_features(x, cfg);
  }

  res.outcomes.resize(res.plan.splits.size());
  tbb::parallel_for(std::size_t{0}, res.plan.splits.size(), [&](std::size_t s) {
    const auto& split = res.plan.splits[s];
    auto& out = res.outcomes[s];
    const std::uint64_t cv_seed = mix_seed(cfg.seeds.cv, s);

    out.feature_order.resize(x.cols());
    std::iota(out.feature_order.begin(), out.feature_order.end(), std::size_t{0});
    if (run_original) out.original = run_arm(x, y, split, cfg, cv_seed, &out.fold_of);
    if (run_pqk) {
      Matrix features;
      if (shared_features) {
        features = *shared_features;
      } else {
        out.feature_order = correlation_order(x.select_rows(split.train));
        features = embed_features(permute_columns(x, out.feature_order), cfg);
      }
      out.pqk = run_arm(features, y, split, cfg, cv_seed, run_original ? nullptr : &out.fold_of);
    }
    std::string msg = "split " + std::to_string(s) + ":";
    if (out.original) msg += " original F1 " + std::to_string(out.original->test_f1);
    if (out.pqk) msg += " pqk F1 " + std::to_string(out.pqk->test_f1);
    log(msg);
  });

  res.data = std::move(data);
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Progress& progress) {
  auto constructs = load_constructs(cfg.dataset.string());
  return run_experiment(cfg, encode_dataset(std::move(constructs)), progress);
}

std::vector<double> default_lambda_sweep() { return {0.001, 0.01, 0.1, 1.0, 10.0}; }

ScreenReport screen_advantage(const Matrix& xc, const Matrix& xq, std::span<const int> y,
                              const KernelSpec& kernel, double lambda,
                              std::span<const double> sweep) {
  if (xc.rows() != xq.rows() || xc.rows() != y.size())
    throw std::invalid_argument("screening inputs disagree on sample count");
  const Matrix kc = kernel_matrix(xc, kernel);
  const Matrix kq = kernel_matrix(xq, kernel);

  auto evaluate = [&](double l) {
    return ScreenPoint{l, geometric_difference(kc, kq, l), model_complexity(kc, y, l),
                       model_complexity(kq, y, l)};
  };

  ScreenReport r;
  r.n = y.size();
  r.sqrt_n = std::sqrt(static_cast<double>(r.n));
  r.kernel = kernel.str();
  r.at = evaluate(lambda);
  for (double l : sweep) r.sweep.push_back(evaluate(l));

  r.separation = r.at.g_cq >= kSeparationRatio * r.sqrt_n;
  r.complexity_gap = r.at.s_c >= kComplexityRatio * r.sqrt_n && r.at.s_q < r.at.s_c;
  if (!r.separation)
    r.verdict = "no separation: g_cq is well below sqrt(N), the classical model is expected to "
                "perform as well as the projected one";
  else if (r.complexity_gap)
    r.verdict = "separation with s_c near sqrt(N) and smaller s_q: potential for PQK to outperform";
  else
    r.verdict = "separation but no model-complexity gap: no prediction advantage expected";
  return r;
}

Matrix leading_positions(const Matrix& bits, const EncodingLayout& layout, std::size_t positions) {
  if (positions == 0 || positions >= layout.n_positions) return bits;
  if (bits.cols() != layout.width()) throw DataError("bit matrix does not match the encoding layout");
  std::vector<std::size_t> cols(positions * layout.n_categories());
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  std::vector<std::size_t> rows(bits.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return bits.select(rows, cols);
}

}  // namespace pqk
