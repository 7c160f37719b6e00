#include "pqk/splits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <ranges>

#include "pqk/errors.hpp"
#include "pqk/hashing.hpp"

namespace pqk {

namespace {

std::size_t checked_train_size(std::size_t n, std::size_t n_splits, double train_frac) {
  if (n < 10) throw DataError("need at least 10 samples to split, got " + std::to_string(n));
  if (n_splits == 0) throw ConfigError("split count must be positive");
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw ConfigError("train fraction must be in (0, 1)");
  const auto n_train = static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(n) + 1e-9));
  if (n_train == 0 || n_train == n) throw DataError("split leaves an empty train or test set");
  return n_train;
}

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

Split sorted_split(std::vector<std::size_t> train, std::vector<std::size_t> test) {
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

}  // namespace

SplitPlan make_splits(std::size_t n, std::size_t n_splits, double train_frac, std::uint64_t seed) {
  const std::size_t n_train = checked_train_size(n, n_splits, train_frac);

  SplitPlan plan{seed, n, {}};
  plan.splits.reserve(n_splits);
  for (std::size_t s = 0; s < n_splits; ++s) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(mix_seed(seed, s));
    shuffle(perm, rng);
    const auto cut = perm.begin() + static_cast<std::ptrdiff_t>(n_train);
    plan.splits.push_back(sorted_split({perm.begin(), cut}, {cut, perm.end()}));
  }
  return plan;
}

SplitPlan make_stratified_splits(std::span<const int> y, std::size_t n_splits, double train_frac,
                                 std::uint64_t seed) {
  const std::size_t n = y.size();
  const std::size_t n_train = checked_train_size(n, n_splits, train_frac);

  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < n; ++i) by_label[y[i]].push_back(i);

  // Largest-remainder allocation; ties go to the smaller label.
  std::vector<std::size_t> quota;
  std::vector<std::pair<double, std::size_t>> remainder;
  std::size_t assigned = 0;
  for (const auto& [label, rows] : by_label) {
    const double exact = train_frac * static_cast<double>(rows.size());
    quota.push_back(static_cast<std::size_t>(std::floor(exact + 1e-9)));
    remainder.emplace_back(exact - static_cast<double>(quota.back()), quota.size() - 1);
    assigned += quota.back();
  }
  std::stable_sort(remainder.begin(), remainder.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < n_train && k < remainder.size(); ++k, ++assigned)
    ++quota[remainder[k].second];

  SplitPlan plan{seed, n, {}};
  plan.splits.reserve(n_splits);
  for (std::size_t s = 0; s < n_splits; ++s) {
    std::mt19937_64 rng(mix_seed(seed, s));
    std::vector<std::size_t> train, test;
    std::size_t l = 0;
    for (auto rows : by_label | std::views::values) {
      shuffle(rows, rng);
      const auto cut = rows.begin() + static_cast<std::ptrdiff_t>(quota[l++]);
      train.insert(train.end(), rows.begin(), cut);
      test.insert(test.end(), cut, rows.end());
    }
    plan.splits.push_back(sorted_split(std::move(train), std::move(test)));
  }
  return plan;
}

void write_split_plan(std::ostream& out, const SplitPlan& plan) {
  out << "split,role,index\n";
  for (std::size_t s = 0; s < plan.splits.size(); ++s) {
    for (auto i : plan.splits[s].train) out << s << ",train," << i << '\n';
    for (auto i : plan.splits[s].test) out << s << ",test," << i << '\n';
  }
}

}  // namespace pqk
