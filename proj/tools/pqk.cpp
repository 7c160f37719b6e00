// pqk: command-line front end for the projected-quantum-kernel pipeline.
//
//   pqk encode   --input constructs.csv --output encoded.csv
//   pqk embed    --input encoded.csv --output features.csv --embedding e1 --reps 8 ...
//   pqk screen   --config experiment.ini
//   pqk train    --input features.csv --kernel rbf -C 1 --output model.json
//   pqk evaluate --model model.json --input features.csv
//   pqk report   --config experiment.ini --output-dir out/
//
// Exit codes: 0 ok, 2 configuration error, 3 data error, 4 backend infeasible.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include "pqk/config.hpp"
#include "pqk/errors.hpp"
#include "pqk/experiment.hpp"
#include "pqk/features.hpp"
#include "pqk/motif_data.hpp"
#include "pqk/report.hpp"
#include "pqk/splits.hpp"
#include "pqk/svm.hpp"

namespace fs = std::filesystem;
using namespace pqk;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kData = 3, kBackend = 4 };

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw DataError("cannot write '" + p.string() + "'");
  return out;
}

void write_json(const fs::path& p, const nlohmann::json& j) {
  if (p.empty() || p == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  open_out(p) << j.dump(2) << '\n';
}

struct EncodeArgs {
  std::string input, output;
};

void cmd_encode(const EncodeArgs& a) {
  auto ds = encode_dataset(load_constructs(a.input));
  spdlog::info("encoded {} constructs into {} bits", ds.size(), ds.layout.width());
  auto out = open_out(a.output);
  write_encoded_csv(out, ds);
}

struct EmbedArgs {
  std::string input, output;
  std::string embedding = "e1";
  unsigned reps = 8;
  std::string scale = "pi2";
  std::string backend = "exact";
  std::string order = "natural";
  std::string entanglement = "linear";
  std::string pair_map = "product";
  std::uint64_t seed = 0;
  std::uint64_t shot_seed = 0;
  std::uint32_t cap = kDefaultStatevectorCap;
  std::string cache;
};

void cmd_embed(const EmbedArgs& a) {
  EmbeddingConfig emb;
  if (a.embedding == "e1") emb.kind = EmbeddingKind::ZZFeatureMap;
  else if (a.embedding == "e2") emb.kind = EmbeddingKind::Heisenberg;
  else throw ConfigError("unknown embedding '" + a.embedding + "' (e1|e2)");
  emb.repetitions = a.reps;
  emb.scale = parse_scale(a.scale);
  emb.seed = a.seed;
  emb.entanglement = a.entanglement == "full" ? Entanglement::Full : Entanglement::Linear;
  if (a.entanglement != "full" && a.entanglement != "linear")
    throw ConfigError("unknown entanglement '" + a.entanglement + "'");
  if (a.pair_map == "shifted") emb.pair_map = PairMap::Shifted;
  else if (a.pair_map != "product") throw ConfigError("unknown pair map '" + a.pair_map + "'");
  if (emb.repetitions == 0) throw ConfigError("repetitions must be >= 1");

  Backend backend = Backend::parse(a.backend);
  backend.shot_seed = a.shot_seed;
  backend.statevector_cap = a.cap;

  auto data = load_labelled_csv(a.input);
  backend.check_admissible(emb.n_qubits(data.features.cols()));

  Matrix x = data.features;
  if (parse_feature_order(a.order) == FeatureOrder::Correlation) {
    const auto order = correlation_order(x);
    x = permute_columns(x, order);
  }

  std::optional<FeatureCache> cache;
  if (!a.cache.empty()) cache.emplace(a.cache);
  LabelledMatrix out_m;
  out_m.features = project_features(x, emb, backend, cache ? &*cache : nullptr);
  out_m.columns = feature_column_names(emb.n_qubits(x.cols()));
  out_m.labels = data.labels;
  spdlog::info("projected {} samples onto {} qubits ({})", x.rows(), emb.n_qubits(x.cols()),
               backend.descriptor());
  auto out = open_out(a.output);
  write_labelled_csv(out, out_m);
}

struct ScreenArgs {
  std::string config, output;
  std::optional<double> lambda;
};

void cmd_screen(const ScreenArgs& a) {
  auto cfg = load_config(a.config);
  if (a.lambda) cfg.screen.lambda = *a.lambda;
  auto ds = encode_dataset(load_constructs(cfg.dataset.string()));
  const auto all_y = ds.labels();
  const auto plan = cfg.stratify ? make_stratified_splits(all_y, 1, cfg.train_fraction, cfg.seeds.split)
                                 : make_splits(ds.size(), 1, cfg.train_fraction, cfg.seeds.split);
  const auto& train = plan.splits.front().train;

  const Matrix bits = leading_positions(ds.bit_matrix().select_rows(train), ds.layout,
                                        cfg.screen.positions);
  cfg.backend.check_admissible(cfg.embedding.n_qubits(bits.cols()));
  std::vector<int> y;
  for (auto i : train) y.push_back(all_y[i]);

  const Matrix features = embed_features(bits, cfg);
  const auto sweep = default_lambda_sweep();
  const auto r = screen_advantage(bits, features, y, cfg.screen.kernel, cfg.screen.lambda, sweep);
  spdlog::info("g_cq {:.3f} vs sqrt(N) {:.3f}; s_c {:.3f}, s_q {:.3f}", r.at.g_cq, r.sqrt_n,
               r.at.s_c, r.at.s_q);
  auto j = to_json(r);
  j["config_hash"] = cfg.hash();
  j["dataset_hash"] = training_hash(bits, y);
  j["embedding"] = cfg.embedding.descriptor();
  j["backend"] = cfg.backend.descriptor();
  write_json(a.output, j);
}

struct TrainArgs {
  std::string input, output;
  std::string kernel = "rbf";
  double c = 1.0;
  std::string gamma = "scale";
  int degree = 3;
  double coef0 = 0.0;
  bool search = false;
  std::size_t folds = 10;
  std::optional<std::uint64_t> seed;
  std::string grid_csv;
};

void cmd_train(const TrainArgs& a) {
  const auto data = load_labelled_csv(a.input);
  KernelSpec spec{parse_kernel_kind(a.kernel), Gamma::parse(a.gamma), a.degree, a.coef0};
  double c = a.c;
  if (!(c > 0.0)) throw ConfigError("C must be > 0");
  if (a.search) {
    if (!a.seed) throw ConfigError("--search requires --seed");
    auto grid = GridSpec::standard();
    grid.degree = a.degree;
    grid.coef0 = a.coef0;
    const auto r = grid_search(data.features, data.labels, grid, a.folds, *a.seed);
    spec = r.best_score().candidate.spec;
    c = r.best_score().candidate.c;
    spdlog::info("best CV weighted F1 {:.4f}: {} C={}", r.best_score().mean, spec.str(), c);
    if (!a.grid_csv.empty()) {
      auto out = open_out(a.grid_csv);
      write_grid_csv(out, r);
    }
  }
  const auto model = smo_train(data.features, data.labels, spec, c);
  spdlog::info("{} support vectors after {} iterations", model.support.size(), model.iterations);
  write_json(a.output, to_json(model));
}

struct EvaluateArgs {
  std::string model, input, predictions, output;
};

void cmd_evaluate(const EvaluateArgs& a) {
  std::ifstream in(a.model);
  if (!in) throw DataError("cannot open model '" + a.model + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model JSON: ") + e.what());
  }
  const auto model = model_from_json(j);
  const auto data = load_labelled_csv(a.input);
  if (data.features.cols() != model.n_features())
    throw DataError("feature width " + std::to_string(data.features.cols()) +
                    " does not match the model's " + std::to_string(model.n_features()));
  const auto pred = predict(model, data.features);
  const double f1 = weighted_f1(data.labels, pred);
  if (!a.predictions.empty()) {
    auto out = open_out(a.predictions);
    out << "index,label,prediction\n";
    for (std::size_t i = 0; i < pred.size(); ++i)
      out << i << ',' << data.labels[i] << ',' << pred[i] << '\n';
  }
  write_json(a.output, {{"weighted_f1", f1},
                        {"n", pred.size()},
                        {"training_hash", model.training_hash},
                        {"evaluated_hash", training_hash(data.features, data.labels)}});
}

struct ReportArgs {
  std::string config, output_dir;
  double alpha = 0.01;
};

void cmd_report(const ReportArgs& a) {
  const auto cfg = load_config(a.config);
  const auto res = run_experiment(cfg, [](const std::string& m) { spdlog::info("{}", m); });
  const auto rep = build_report(res);
  const fs::path dir = a.output_dir;
  write_json(dir / "report.json", to_json(rep, a.alpha));
  {
    auto out = open_out(dir / "counts.csv");
    write_counts_csv(out, rep, a.alpha);
  }
  {
    auto out = open_out(dir / "f1.csv");
    write_f1_csv(out, res);
  }
  {
    auto out = open_out(dir / "splits.csv");
    write_split_plan(out, res.plan);
  }
  for (const auto& [arm, s] : rep.arms)
    spdlog::info("{}: median F1 {:.4f}, max {:.4f}", to_string(arm), s.median, s.max);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projected quantum kernel pipeline for CAR T-cell cytotoxicity"};
  app.require_subcommand(1);
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");
  app.add_flag("-q,--quiet", quiet, "Warnings and errors only");
  spdlog::set_default_logger(spdlog::stderr_color_mt("pqk"));

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "One-hot encode a constructs CSV");
  encode->add_option("-i,--input", enc.input, "Constructs CSV")->required();
  encode->add_option("-o,--output", enc.output, "Encoded CSV")->required();

  EmbedArgs emb;
  auto* embed = app.add_subcommand("embed", "Project encoded samples to 1-RDM features");
  embed->add_option("-i,--input", emb.input, "Encoded CSV")->required();
  embed->add_option("-o,--output", emb.output, "Feature CSV")->required();
  embed->add_option("--embedding", emb.embedding, "e1 | e2")->capture_default_str();
  auto* reps = embed->add_option("--reps", emb.reps, "E1 repetitions")->capture_default_str();
  embed->add_option("--steps", emb.reps, "E2 Trotter steps")->excludes(reps);
  embed->add_option("--scale", emb.scale, "pi | pi2 | radians")->capture_default_str();
  embed->add_option("--backend", emb.backend, "exact | shots:<n> | obp:<threshold>[+shots:<n>]")
      ->capture_default_str();
  embed->add_option("--order", emb.order, "natural | correlation")->capture_default_str();
  embed->add_option("--entanglement", emb.entanglement, "linear | full")->capture_default_str();
  embed->add_option("--pair-map", emb.pair_map, "E1 pair angle: product | shifted")
      ->capture_default_str();
  embed->add_option("--seed", emb.seed, "Embedding seed (E2 initial layer)")->required();
  embed->add_option("--shot-seed", emb.shot_seed, "Seed for shot sampling")->capture_default_str();
  embed->add_option("--statevector-cap", emb.cap, "Largest exact simulation")->capture_default_str();
  embed->add_option("--cache", emb.cache, "Feature cache directory");

  ScreenArgs scr;
  auto* screen = app.add_subcommand("screen", "Kernel geometry screening (g_cq, s_c, s_q)");
  screen->add_option("-c,--config", scr.config, "Experiment config")->required();
  screen->add_option("-o,--output", scr.output, "JSON output (default stdout)");
  screen->add_option("--lambda", scr.lambda, "Override the regularization");

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Fit an SVM on a labelled feature CSV");
  train->add_option("-i,--input", tr.input, "Labelled CSV")->required();
  train->add_option("-o,--output", tr.output, "Model JSON")->required();
  train->add_option("--kernel", tr.kernel, "linear | poly | rbf | sigmoid")->capture_default_str();
  train->add_option("-C,--penalty", tr.c, "Box constraint C")->capture_default_str();
  train->add_option("--gamma", tr.gamma, "auto | scale | value")->capture_default_str();
  train->add_option("--degree", tr.degree, "Polynomial degree")->capture_default_str();
  train->add_option("--coef0", tr.coef0, "Kernel offset")->capture_default_str();
  train->add_flag("--search", tr.search, "Select kernel, C and gamma by cross-validated grid search");
  train->add_option("--folds", tr.folds, "CV folds for --search")->capture_default_str();
  train->add_option("--seed", tr.seed, "Fold seed for --search");
  train->add_option("--grid-csv", tr.grid_csv, "Write per-candidate CV scores");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score a saved model on a labelled CSV");
  evaluate->add_option("-m,--model", ev.model, "Model JSON")->required();
  evaluate->add_option("-i,--input", ev.input, "Labelled CSV")->required();
  evaluate->add_option("-p,--predictions", ev.predictions, "Per-sample predictions CSV");
  evaluate->add_option("-o,--output", ev.output, "JSON output (default stdout)");

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Run the split protocol and write reports");
  report->add_option("-c,--config", rp.config, "Experiment config")->required();
  report->add_option("-o,--output-dir", rp.output_dir, "Output directory")->required();
  report->add_option("--alpha", rp.alpha, "Significance level")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : quiet ? spdlog::level::warn : spdlog::level::info);

  try {
    if (*encode) cmd_encode(enc);
    else if (*embed) cmd_embed(emb);
    else if (*screen) cmd_screen(scr);
    else if (*train) cmd_train(tr);
    else if (*evaluate) cmd_evaluate(ev);
    else if (*report) cmd_report(rp);
  } catch (const ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return kConfig;
  } catch (const DataError& e) {
    spdlog::error("data: {}", e.what());
    return kData;
  } catch (const BackendInfeasible& e) {
    spdlog::error("backend: {}", e.what());
    return kBackend;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kFailure;
  }
  return kOk;
}
