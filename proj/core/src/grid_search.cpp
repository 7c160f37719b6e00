#include "pqk/grid_search.hpp"

#include <spdlog/spdlog.h>
#include <tbb/parallel_for.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

#include "pqk/csv.hpp"
#include "pqk/errors.hpp"

namespace pqk {

std::vector<double> decimal_range(int first, int last, int step) {
  if (step <= 0 || last < first) throw std::invalid_argument("bad decimal range");
  std::vector<double> out;
  for (int k = first; k <= last; k += step) out.push_back(static_cast<double>(k) / 100.0);
  return out;
}

GridSpec GridSpec::standard() {
  GridSpec g;
  g.kernels = {KernelKind::Linear, KernelKind::Poly, KernelKind::Rbf, KernelKind::Sigmoid};

  g.c_values = {0.001, 0.005, 0.007, 0.01};
  for (double v : decimal_range(1, 10, 1)) g.c_values.push_back(v);
  for (double v : decimal_range(25, 1475, 25)) g.c_values.push_back(v);
  for (double v : {20.0, 50.0, 100.0, 200.0, 500.0, 700.0, 1000.0, 1100.0, 1200.0, 1300.0,
                   1400.0, 1500.0, 1700.0, 2000.0})
    g.c_values.push_back(v);

  g.gammas = {Gamma::automatic(), Gamma::scale(), Gamma::of(0.001), Gamma::of(0.005),
              Gamma::of(0.007)};
  for (double v : decimal_range(1, 10, 1)) g.gammas.push_back(Gamma::of(v));
  for (double v : decimal_range(25, 1475, 25)) g.gammas.push_back(Gamma::of(v));
  for (double v : {20.0, 50.0, 100.0}) g.gammas.push_back(Gamma::of(v));
  return g;
}

std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t folds,
                                          std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("need at least two folds");
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < y.size(); ++i) by_label[y[i]].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fold_of(y.size(), 0);
  std::size_t next = 0;
  for (auto& [label, idx] : by_label) {
    for (std::size_t i = idx.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(idx[i - 1], idx[j]);
    }
    for (std::size_t r : idx) fold_of[r] = next++ % folds;
  }
  return fold_of;
}

std::size_t feasible_folds(std::span<const int> y, std::size_t requested) {
  std::map<int, std::size_t> counts;
  for (int v : y) ++counts[v];
  if (counts.size() < 2) throw DataError("cross-validation needs both labels in the training data");
  std::size_t minority = y.size();
  for (const auto& [label, n] : counts) minority = std::min(minority, n);
  if (minority < 2) throw DataError("a label has fewer than two training samples; cannot stratify");
  if (minority < requested) {
    spdlog::warn("reducing CV folds from {} to {}: minority label has {} samples", requested,
                 minority, minority);
    return minority;
  }
  return requested;
}

namespace {

struct FoldIndex {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

double score_fold(const Matrix& gram, std::span<const int> y, const FoldIndex& f, double c,
                  const SmoOptions& opts) {
  const Matrix k_train = gram.select(f.train, f.train);
  std::vector<int> y_train;
  y_train.reserve(f.train.size());
  for (auto i : f.train) y_train.push_back(y[i]);
  const auto sol = smo_solve(k_train, y_train, c, opts);

  std::vector<int> y_true, y_pred;
  for (auto t : f.test) {
    double v = sol.bias;
    for (std::size_t s = 0; s < f.train.size(); ++s)
      if (sol.alpha[s] > 0.0) v += sol.alpha[s] * y_train[s] * gram(t, f.train[s]);
    y_true.push_back(y[t]);
    y_pred.push_back(v >= 0.0 ? 1 : -1);
  }
  return weighted_f1(y_true, y_pred);
}

}  // namespace

namespace {

// F1 of every candidate on every partition, indexed [candidate][partition].
// γ is resolved on each partition's training rows.
std::vector<std::vector<double>> evaluate_partitions(const Matrix& x, std::span<const int> y,
                                                     const std::vector<FoldIndex>& parts,
                                                     const GridSpec& grid,
                                                     const SmoOptions& opts) {
  std::vector<Matrix> part_x;
  for (const auto& f : parts) part_x.push_back(x.select_rows(f.train));

  const std::size_t nc = grid.c_values.size();
  const std::size_t ng = grid.gammas.size();
  std::vector<std::vector<double>> scores(grid.size(), std::vector<double>(parts.size()));
  auto slot = [&](std::size_t kk, std::size_t ci, std::size_t gi) { return (kk * nc + ci) * ng + gi; };

  // One work item per (kernel, γ). The linear kernel ignores γ, so only its
  // first γ column is evaluated and then copied.
  struct Group {
    std::size_t kernel;
    std::size_t gamma;
  };
  std::vector<Group> groups;
  for (std::size_t kk = 0; kk < grid.kernels.size(); ++kk)
    for (std::size_t gi = 0; gi < ng; ++gi)
      if (grid.kernels[kk] != KernelKind::Linear || gi == 0) groups.push_back({kk, gi});

  tbb::parallel_for(std::size_t{0}, groups.size(), [&](std::size_t gidx) {
    const auto [kk, gi] = groups[gidx];
    const KernelSpec spec{grid.kernels[kk], grid.gammas[gi], grid.degree, grid.coef0};
    const std::size_t g_end = grid.kernels[kk] == KernelKind::Linear ? ng : gi + 1;

    std::map<double, Matrix> gram_cache;
    for (std::size_t f = 0; f < parts.size(); ++f) {
      const auto kernel = ResolvedKernel::resolve(spec, part_x[f]);
      auto it = gram_cache.find(kernel.gamma);
      if (it == gram_cache.end()) it = gram_cache.emplace(kernel.gamma, kernel_matrix(x, kernel)).first;
      for (std::size_t ci = 0; ci < nc; ++ci) {
        const double v = score_fold(it->second, y, parts[f], grid.c_values[ci], opts);
        for (std::size_t g2 = gi; g2 < g_end; ++g2) scores[slot(kk, ci, g2)][f] = v;
      }
    }
  });
  return scores;
}

std::vector<Candidate> enumerate(const GridSpec& grid) {
  std::vector<Candidate> out;
  out.reserve(grid.size());
  for (auto kind : grid.kernels)
    for (double c : grid.c_values)
      for (const auto& g : grid.gammas) out.push_back({{kind, g, grid.degree, grid.coef0}, c});
  return out;
}

}  // namespace

GridResult grid_search(const Matrix& x, std::span<const int> y, const GridSpec& grid,
                       std::size_t folds, std::uint64_t seed, const SmoOptions& opts) {
  if (grid.size() == 0) throw ConfigError("hyperparameter grid is empty");
  if (y.size() != x.rows()) throw std::invalid_argument("label count differs from sample count");

  GridResult result;
  result.seed = seed;
  result.folds = feasible_folds(y, folds);
  result.fold_of = stratified_folds(y, result.folds, seed);

  std::vector<FoldIndex> parts(result.folds);
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t f = 0; f < result.folds; ++f) {
      if (result.fold_of[i] == f) parts[f].test.push_back(i);
      else parts[f].train.push_back(i);
    }
  }

  auto scores = evaluate_partitions(x, y, parts, grid, opts);
  const auto candidates = enumerate(grid);
  result.scores.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& s = scores[i];
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    var /= static_cast<double>(s.size());
    result.scores.push_back({candidates[i], mean, std::sqrt(var), std::move(scores[i])});
  }

  for (std::size_t i = 1; i < result.scores.size(); ++i)
    if (result.scores[i].mean > result.scores[result.best].mean) result.best = i;
  return result;
}

std::vector<double> holdout_scores(const Matrix& x_train, std::span<const int> y_train,
                                   const Matrix& x_test, std::span<const int> y_test,
                                   const GridSpec& grid, const SmoOptions& opts) {
  if (grid.size() == 0) throw ConfigError("hyperparameter grid is empty");
  if (x_train.cols() != x_test.cols()) throw std::invalid_argument("train/test width mismatch");
  std::vector<std::size_t> all(x_train.rows() + x_test.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  Matrix x(all.size(), x_train.cols());
  std::vector<int> y(all.size());
  FoldIndex part;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const bool tr = i < x_train.rows();
    const auto src = tr ? x_train.row(i) : x_test.row(i - x_train.rows());
    std::copy(src.begin(), src.end(), x.row(i).begin());
    y[i] = tr ? y_train[i] : y_test[i - x_train.rows()];
    (tr ? part.train : part.test).push_back(i);
  }
  const auto scores = evaluate_partitions(x, y, {part}, grid, opts);
  std::vector<double> out;
  out.reserve(scores.size());
  for (const auto& s : scores) out.push_back(s.front());
  return out;
}

void write_grid_csv(std::ostream& out, const GridResult& r) {
  out << "kernel,C,gamma,mean_f1,std_f1";
  for (std::size_t f = 0; f < r.folds; ++f) out << ",fold" << f;
  out << ",chosen\n";
  for (std::size_t i = 0; i < r.scores.size(); ++i) {
    const auto& s = r.scores[i];
    out << to_string(s.candidate.spec.kind) << ',' << csv::format_double(s.candidate.c) << ','
        << s.candidate.spec.gamma.str() << ',' << csv::format_double(s.mean) << ','
        << csv::format_double(s.stddev);
    for (double v : s.fold_scores) out << ',' << csv::format_double(v);
    out << ',' << (i == r.best ? 1 : 0) << '\n';
  }
}

}  // namespace pqk
