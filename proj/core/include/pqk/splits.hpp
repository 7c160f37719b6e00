#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace pqk {

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;

  bool operator==(const Split&) const = default;
};

/// Repeated random train/test partitions of 0..N-1.
struct SplitPlan {
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  std::vector<Split> splits;

  bool operator==(const SplitPlan&) const = default;
};

/// Each split shuffles 0..N-1 with its own generator derived from (seed,
/// split index) and takes the first floor(train_frac * N) as training rows.
/// Index lists are sorted. Throws DataError when N < 10.
SplitPlan make_splits(std::size_t n, std::size_t n_splits, double train_frac, std::uint64_t seed);

/// Like make_splits, but each label keeps its share of the training rows:
/// per-label quotas floor(train_frac * n_label), with leftover rows up to
/// floor(train_frac * N) going to the largest remainders.
SplitPlan make_stratified_splits(std::span<const int> y, std::size_t n_splits, double train_frac,
                                 std::uint64_t seed);

/// `split,role,index` rows.
void write_split_plan(std::ostream& out, const SplitPlan& plan);

}  // namespace pqk
