#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "pqk/config.hpp"
#include "pqk/errors.hpp"
#include "pqk/experiment.hpp"
#include "pqk/fisher.hpp"
#include "pqk/report.hpp"
#include "pqk/splits.hpp"
#include "synthetic.hpp"

using namespace pqk;

namespace {

const char* kBaseConfig = R"(
[data]
path = constructs.csv

[embedding]
kind = identity

[experiment]
splits = 2
folds = 3

[grid]
preset = custom
kernels = linear, rbf
c = 0.1, 1, 10
gamma = scale, 0.5

[seeds]
split = 1
cv = 2
embedding = 3
shots = 4
)";

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "/base");
}

std::string with(std::string text, const std::string& find, const std::string& replace) {
  const auto at = text.find(find);
  if (at == std::string::npos) throw std::logic_error("fixture text not found: " + find);
  return text.replace(at, find.size(), replace);
}

ExperimentConfig small_config() {
  auto cfg = parse(kBaseConfig);
  cfg.n_splits = 3;
  return cfg;
}

}  // namespace

TEST(Splits, SizesDisjointAndCovering) {
  const auto plan = make_splits(246, 10, 0.7, 5);
  ASSERT_EQ(plan.splits.size(), 10u);
  for (const auto& s : plan.splits) {
    EXPECT_EQ(s.train.size(), 172u);
    EXPECT_EQ(s.test.size(), 74u);
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    all.insert(s.test.begin(), s.test.end());
    EXPECT_EQ(all.size(), 246u);
    EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
  }
  EXPECT_NE(plan.splits[0].train, plan.splits[1].train);
}

TEST(Splits, DeterministicInSeed) {
  EXPECT_EQ(make_splits(50, 4, 0.7, 11), make_splits(50, 4, 0.7, 11));
  EXPECT_NE(make_splits(50, 4, 0.7, 11).splits[0].train, make_splits(50, 4, 0.7, 12).splits[0].train);
}

TEST(Splits, Errors) {
  EXPECT_THROW(make_splits(9, 1, 0.7, 0), DataError);
  EXPECT_THROW(make_splits(20, 0, 0.7, 0), ConfigError);
  EXPECT_THROW(make_splits(20, 1, 1.0, 0), ConfigError);
}

TEST(Splits, StratifiedKeepsLabelShares) {
  std::vector<int> y(246, -1);
  for (std::size_t i = 0; i < 100; ++i) y[i * 2] = 1;
  const auto plan = make_stratified_splits(y, 5, 0.7, 3);
  EXPECT_EQ(plan, make_stratified_splits(y, 5, 0.7, 3));
  for (const auto& s : plan.splits) {
    EXPECT_EQ(s.train.size(), 172u);
    EXPECT_EQ(s.test.size(), 74u);
    const auto pos = std::count_if(s.train.begin(), s.train.end(), [&](std::size_t i) { return y[i] == 1; });
    EXPECT_EQ(pos, 70);
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    all.insert(s.test.begin(), s.test.end());
    EXPECT_EQ(all.size(), 246u);
  }
  EXPECT_THROW(make_stratified_splits(std::vector<int>(5, 1), 1, 0.7, 0), DataError);
}

TEST(Splits, CsvLayout) {
  std::ostringstream os;
  write_split_plan(os, make_splits(10, 1, 0.7, 0));
  const auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "split,role,index");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 11);
}

TEST(Fisher, KnownValues) {
  // Lady tasting tea.
  EXPECT_NEAR(fisher_exact({{{3, 1}, {1, 3}}}), 0.4857142857142857, 1e-12);
  EXPECT_NEAR(fisher_exact({{{1, 9}, {11, 3}}}), 0.002759456185220083, 1e-12);
  EXPECT_NEAR(fisher_exact({{{40, 0}, {20, 20}}}), oracle::fisher_two_sided(40, 0, 20, 20), 1e-14);
  EXPECT_DOUBLE_EQ(fisher_exact({{{0, 0}, {5, 3}}}), 1.0);
  EXPECT_DOUBLE_EQ(fisher_exact({{{5, 5}, {5, 5}}}), 1.0);
}

TEST(Fisher, SymmetricUnderTranspositionAndSwaps) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t a = rng() % 25, b = rng() % 25, c = rng() % 25, d = rng() % 25;
    const double p = fisher_exact({{{a, b}, {c, d}}});
    EXPECT_NEAR(fisher_exact({{{a, c}, {b, d}}}), p, 1e-12);
    EXPECT_NEAR(fisher_exact({{{c, d}, {a, b}}}), p, 1e-12);
    EXPECT_NEAR(p, oracle::fisher_two_sided(a, b, c, d), 1e-10 * std::max(p, 1e-300) + 1e-14);
  }
}

TEST(PerMotif, SignificantCellPointsToPqk) {
  EvalReport r;
  const CellKey key{Axis::Motif, 1, "M1"};
  r.arms[Arm::Pqk].cells[key] = Counts{40, 0};
  r.arms[Arm::Original].cells[key] = Counts{20, 20};
  const CellKey flat{Axis::Motif, 2, "M2"};
  r.arms[Arm::Pqk].cells[flat] = Counts{10, 10};
  r.arms[Arm::Original].cells[flat] = Counts{10, 10};
  const auto rows = per_motif_analysis(r);
  ASSERT_EQ(rows.size(), 2u);
  const auto& hit = rows[0].cell == key ? rows[0] : rows[1];
  const auto& miss = rows[0].cell == key ? rows[1] : rows[0];
  EXPECT_TRUE(hit.significant);
  EXPECT_EQ(hit.direction, "pqk");
  EXPECT_LT(hit.p_value, 1e-6);
  EXPECT_FALSE(miss.significant);
  EXPECT_EQ(miss.direction, "none");
  EXPECT_DOUBLE_EQ(miss.p_value, 1.0);
}

TEST(PerMotif, NeedsBothArms) {
  EvalReport r;
  r.arms[Arm::Pqk];
  EXPECT_THROW(per_motif_analysis(r), DataError);
}

TEST(Annotate, Axes) {
  EXPECT_EQ(annotate(std::nullopt, Axis::Motif), std::vector<std::string>{"Empty"});
  EXPECT_EQ(annotate(MotifId::terminal(), Axis::Source), std::vector<std::string>{"Terminal"});
  EXPECT_EQ(annotate(MotifId(1), Axis::Motif), std::vector<std::string>{"M1"});
  for (const auto& m : motif_catalog()) {
    if (m.terminal) continue;
    EXPECT_EQ(annotate(m.id, Axis::Partner).size(), std::max<std::size_t>(1, m.binding_partners.size()));
  }
}

TEST(Median, EvenAndOdd) {
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
}

TEST(Config, ParsesAndResolvesPaths) {
  const auto cfg = parse(kBaseConfig);
  EXPECT_EQ(cfg.dataset, std::filesystem::path("/base/constructs.csv"));
  EXPECT_EQ(cfg.embedding.kind, EmbeddingKind::Identity);
  EXPECT_EQ(cfg.n_splits, 2u);
  EXPECT_EQ(cfg.folds, 3u);
  EXPECT_EQ(cfg.grid.size(), 12u);
  EXPECT_EQ(cfg.seeds.embedding, 3u);
  EXPECT_EQ(cfg.embedding.seed, 3u);
  EXPECT_EQ(cfg.backend.shot_seed, 4u);
  EXPECT_DOUBLE_EQ(cfg.train_fraction, 0.7);
  EXPECT_EQ(cfg.hash(), parse(kBaseConfig).hash());
  EXPECT_NE(cfg.hash(), parse(with(kBaseConfig, "cv = 2", "cv = 5")).hash());
  EXPECT_FALSE(cfg.stratify);
  const auto strat = parse(with(kBaseConfig, "folds = 3", "folds = 3\nstratify = true"));
  EXPECT_TRUE(strat.stratify);
  EXPECT_NE(strat.hash(), cfg.hash());
}

TEST(Config, InlineComments) {
  const auto cfg = parse(with(kBaseConfig, "folds = 3", "folds = 4   ; per split\norder = correlation # leaf order"));
  EXPECT_EQ(cfg.folds, 4u);
  EXPECT_EQ(cfg.order, FeatureOrder::Correlation);
}

TEST(Config, DefaultsToFullGrid) {
  const auto cfg = parse(with(kBaseConfig, "preset = custom\nkernels = linear, rbf\nc = 0.1, 1, 10\ngamma = scale, 0.5",
                              "preset = standard"));
  EXPECT_EQ(cfg.grid.size(), 4u * 87u * 77u);
}

TEST(Config, EmbeddingSettings) {
  const auto cfg = parse(with(kBaseConfig, "kind = identity",
                              "kind = e2\nsteps = 5\nscale = pi\npair_map = shifted"));
  EXPECT_EQ(cfg.embedding.kind, EmbeddingKind::Heisenberg);
  EXPECT_EQ(cfg.embedding.repetitions, 5u);
  EXPECT_DOUBLE_EQ(cfg.embedding.scale, kScalePi);
  EXPECT_EQ(cfg.embedding.pair_map, PairMap::Shifted);
  EXPECT_DOUBLE_EQ(parse_scale("pi2"), kScaleHalfPi);
  EXPECT_DOUBLE_EQ(parse_scale("0.25"), 0.25);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse(with(kBaseConfig, "shots = 4", "")), ConfigError);
  EXPECT_THROW(parse(with(kBaseConfig, "[data]", "[bogus]\nx = 1\n[data]")), ConfigError);
  EXPECT_THROW(parse(with(kBaseConfig, "folds = 3", "folds = 3\ncolour = red")), ConfigError);
  EXPECT_THROW(parse(with(kBaseConfig, "folds = 3", "folds = 1")), ConfigError);
  EXPECT_THROW(parse(with(kBaseConfig, "kind = identity", "kind = e9")), ConfigError);
  EXPECT_THROW(parse(with(kBaseConfig, "kind = identity", "kind = e1\nreps = 2\nsteps = 2")), ConfigError);
  EXPECT_THROW(parse(with(kBaseConfig, "folds = 3", "folds = three")), ConfigError);
  EXPECT_THROW(parse(with(kBaseConfig, "c = 0.1, 1, 10", "c = 0, 1")), ConfigError);
  EXPECT_THROW(parse(with(kBaseConfig, "kind = identity", "kind = identity\n[backend]\nname = warp")),
               ConfigError);
  EXPECT_THROW(parse(with(kBaseConfig, "folds = 3", "folds = 3\nstratify = maybe")), ConfigError);
  EXPECT_THROW(parse_scale("tau"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/pqk.ini"), ConfigError);
}

TEST(Screen, IdenticalFeaturesShowNoSeparation) {
  const auto ds = encode_dataset(synthetic::rule_constructs(2), synthetic::reduced_layout());
  const auto x = ds.bit_matrix();
  const auto rep = screen_advantage(x, x, ds.labels(), KernelSpec{KernelKind::Rbf, Gamma::scale()}, 1.0,
                                    default_lambda_sweep());
  const auto k = kernel_matrix(x, KernelSpec{KernelKind::Rbf, Gamma::scale()});
  EXPECT_NEAR(rep.at.g_cq, oracle::geometric_difference(k, k, 1.0), 1e-8);
  EXPECT_LT(rep.at.g_cq, 1.0);
  EXPECT_NEAR(rep.at.s_c, rep.at.s_q, 1e-9);
  EXPECT_FALSE(rep.separation);
  EXPECT_EQ(rep.verdict.rfind("no separation", 0), 0u);
  EXPECT_EQ(rep.sweep.size(), default_lambda_sweep().size());
  EXPECT_EQ(to_json(rep)["verdict"], rep.verdict);
}

TEST(Screen, LeadingPositions) {
  const auto layout = synthetic::reduced_layout();
  const auto ds = encode_dataset(synthetic::rule_constructs(1), layout);
  const auto cut = leading_positions(ds.bit_matrix(), layout, 2);
  EXPECT_EQ(cut.cols(), 2 * layout.n_categories());
  EXPECT_EQ(leading_positions(ds.bit_matrix(), layout, 0).cols(), layout.width());
}

TEST(Experiment, SmallRunIsDeterministicAndConsistent) {
  const auto cfg = small_config();
  const auto ds = encode_dataset(synthetic::rule_constructs(4), synthetic::reduced_layout());
  const auto a = run_experiment(cfg, ds);
  const auto b = run_experiment(cfg, ds);
  const auto ra = build_report(a);
  EXPECT_EQ(to_json(ra).dump(), to_json(build_report(b)).dump());

  ASSERT_EQ(a.outcomes.size(), 3u);
  for (const auto& o : a.outcomes) {
    ASSERT_TRUE(o.original && o.pqk);
    EXPECT_LE(o.original->test_f1, o.original->best_test_f1 + 1e-12);
    EXPECT_EQ(o.original->cv_folds, 3u);
  }
  // Every test prediction lands in exactly one cell per (axis, position).
  for (const auto& [arm, summary] : ra.arms) {
    std::map<std::pair<Axis, std::size_t>, std::uint64_t> per_slot;
    for (const auto& [key, counts] : summary.cells)
      if (std::get<0>(key) == Axis::Motif) per_slot[{Axis::Motif, std::get<1>(key)}] += counts.total();
    std::uint64_t tests = 0;
    for (auto n : ra.test_sizes) tests += n;
    for (const auto& [slot, total] : per_slot) EXPECT_EQ(total, tests);
  }
  EXPECT_EQ(ra.version, kVersion);
  EXPECT_EQ(ra.config_hash, cfg.hash());

  std::ostringstream counts, f1;
  write_counts_csv(counts, ra);
  write_f1_csv(f1, a);
  const auto f1_text = f1.str();
  EXPECT_EQ(std::count(f1_text.begin(), f1_text.end(), '\n'), 1 + 2 * 3);
  EXPECT_GT(counts.str().size(), 0u);
}

TEST(Experiment, BackendCheckedBeforeWork) {
  auto cfg = small_config();
  cfg.embedding.kind = EmbeddingKind::ZZFeatureMap;
  cfg.backend.statevector_cap = 8;
  const auto ds = encode_dataset(synthetic::rule_constructs(2), synthetic::reduced_layout());
  EXPECT_THROW(run_experiment(cfg, ds), BackendInfeasible);
}

TEST(Experiment, CorrelationOrderPermutesColumns) {
  auto cfg = small_config();
  cfg.order = FeatureOrder::Correlation;
  cfg.arms = Arms::Pqk;
  const auto ds = encode_dataset(synthetic::rule_constructs(3), synthetic::reduced_layout());
  const auto r = run_experiment(cfg, ds);
  for (const auto& o : r.outcomes) {
    EXPECT_FALSE(o.original.has_value());
    auto sorted = o.feature_order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> iota(ds.layout.width());
    std::iota(iota.begin(), iota.end(), std::size_t{0});
    EXPECT_EQ(sorted, iota);
  }
}
