#include "pqk/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pqk/csv.hpp"
#include "pqk/errors.hpp"
#include "pqk/hashing.hpp"

namespace pqk {

namespace pt = boost::property_tree;

std::string_view to_string(FeatureOrder o) {
  return o == FeatureOrder::Natural ? "natural" : "correlation";
}

FeatureOrder parse_feature_order(std::string_view text) {
  if (text == "natural") return FeatureOrder::Natural;
  if (text == "correlation") return FeatureOrder::Correlation;
  throw ConfigError("unknown feature order '" + std::string(text) + "' (natural|correlation)");
}

std::string_view to_string(Arms a) {
  switch (a) {
    case Arms::Both: return "both";
    case Arms::Original: return "original";
    case Arms::Pqk: return "pqk";
  }
  return "?";
}

double parse_scale(std::string_view text) {
  if (text == "pi") return kScalePi;
  if (text == "pi2") return kScaleHalfPi;
  try {
    const double v = csv::parse_double(text);
    if (!std::isfinite(v)) throw DataError("");
    return v;
  } catch (const DataError&) {
    throw ConfigError("invalid scale '" + std::string(text) + "' (pi|pi2|<radians>)");
  }
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"data", {"path"}},
      {"embedding", {"kind", "reps", "steps", "scale", "entanglement", "pair_map"}},
      {"backend", {"name", "statevector_cap", "cache_dir"}},
      {"experiment", {"splits", "train_fraction", "folds", "order", "arms", "stratify"}},
      {"grid", {"preset", "kernels", "c", "gamma", "degree", "coef0"}},
      {"screen", {"kernel", "gamma", "lambda", "positions"}},
      {"seeds", {"split", "cv", "embedding", "shots"}},
  };
  return s;
}

// Drops a trailing `; ...` or `# ...` comment preceded by whitespace.
std::string strip_comment(std::string v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if ((v[i] == ';' || v[i] == '#') && (v[i - 1] == ' ' || v[i - 1] == '\t')) {
      v.erase(i);
      break;
    }
  }
  const auto end = v.find_last_not_of(" \t");
  v.erase(end == std::string::npos ? 0 : end + 1);
  return v;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> get(const std::string& section, const std::string& key) const {
    auto v = tree_.get_optional<std::string>(pt::ptree::path_type(section + "." + key, '.'));
    if (!v) return std::nullopt;
    return strip_comment(*v);
  }

  std::string require(const std::string& section, const std::string& key) const {
    auto v = get(section, key);
    if (!v || v->empty()) throw ConfigError("missing required setting [" + section + "] " + key);
    return *v;
  }

  template <class T>
  static T integer(const std::string& text, const std::string& what) {
    T v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw ConfigError("invalid integer for " + what + ": '" + text + "'");
    return v;
  }

  static double number(const std::string& text, const std::string& what) {
    try {
      return csv::parse_double(text);
    } catch (const DataError&) {
      throw ConfigError("invalid number for " + what + ": '" + text + "'");
    }
  }

 private:
  const pt::ptree& tree_;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty entry in list '" + text + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  for (const auto& [section, body] : tree) {
    auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("unknown config section [" + section + "]");
    if (!body.data().empty()) throw ConfigError("setting '" + section + "' outside any section");
    for (const auto& [key, value] : body)
      if (!it->second.contains(key))
        throw ConfigError("unknown setting [" + section + "] " + key);
  }

  const Reader r(tree);
  ExperimentConfig cfg;

  cfg.dataset = r.require("data", "path");
  if (cfg.dataset.is_relative() && !base_dir.empty()) cfg.dataset = base_dir / cfg.dataset;

  const auto kind = r.get("embedding", "kind").value_or("e1");
  if (kind == "e1") cfg.embedding.kind = EmbeddingKind::ZZFeatureMap;
  else if (kind == "e2") cfg.embedding.kind = EmbeddingKind::Heisenberg;
  else if (kind == "identity") cfg.embedding.kind = EmbeddingKind::Identity;
  else throw ConfigError("unknown embedding '" + kind + "' (e1|e2|identity)");
  const auto reps = r.get("embedding", "reps");
  const auto steps = r.get("embedding", "steps");
  if (reps && steps) throw ConfigError("give either [embedding] reps or steps, not both");
  if (reps || steps)
    cfg.embedding.repetitions = Reader::integer<unsigned>(reps ? *reps : *steps, "repetitions");
  if (cfg.embedding.kind != EmbeddingKind::Identity && cfg.embedding.repetitions == 0)
    throw ConfigError("repetitions must be >= 1");
  if (auto s = r.get("embedding", "scale")) cfg.embedding.scale = parse_scale(*s);
  if (auto e = r.get("embedding", "entanglement")) {
    if (*e == "linear") cfg.embedding.entanglement = Entanglement::Linear;
    else if (*e == "full") cfg.embedding.entanglement = Entanglement::Full;
    else throw ConfigError("unknown entanglement '" + *e + "' (linear|full)");
  }

  if (auto p = r.get("embedding", "pair_map")) {
    if (*p == "product") cfg.embedding.pair_map = PairMap::Product;
    else if (*p == "shifted") cfg.embedding.pair_map = PairMap::Shifted;
    else throw ConfigError("unknown pair_map '" + *p + "' (product|shifted)");
  }

  if (auto b = r.get("backend", "name")) cfg.backend = Backend::parse(*b);
  if (auto cap = r.get("backend", "statevector_cap"))
    cfg.backend.statevector_cap = Reader::integer<std::uint32_t>(*cap, "statevector_cap");
  if (auto dir = r.get("backend", "cache_dir")) {
    std::filesystem::path p = *dir;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    cfg.cache_dir = p;
  }

  if (auto v = r.get("experiment", "splits")) cfg.n_splits = Reader::integer<std::size_t>(*v, "splits");
  if (auto v = r.get("experiment", "train_fraction"))
    cfg.train_fraction = Reader::number(*v, "train_fraction");
  if (auto v = r.get("experiment", "folds")) cfg.folds = Reader::integer<std::size_t>(*v, "folds");
  if (cfg.n_splits == 0) throw ConfigError("splits must be >= 1");
  if (cfg.folds < 2) throw ConfigError("folds must be >= 2");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
    throw ConfigError("train_fraction must be in (0, 1)");
  if (auto v = r.get("experiment", "order")) cfg.order = parse_feature_order(*v);
  if (auto v = r.get("experiment", "arms")) {
    if (*v == "both") cfg.arms = Arms::Both;
    else if (*v == "original") cfg.arms = Arms::Original;
    else if (*v == "pqk") cfg.arms = Arms::Pqk;
    else throw ConfigError("unknown arms '" + *v + "' (both|original|pqk)");
  }
  if (auto v = r.get("experiment", "stratify")) {
    if (*v == "true") cfg.stratify = true;
    else if (*v == "false") cfg.stratify = false;
    else throw ConfigError("stratify must be true or false");
  }

  const auto preset = r.get("grid", "preset").value_or("standard");
  if (preset == "custom") {
    cfg.grid = GridSpec{};
    for (const auto& k : split_list(r.require("grid", "kernels")))
      cfg.grid.kernels.push_back(parse_kernel_kind(k));
    for (const auto& c : split_list(r.require("grid", "c"))) {
      const double v = Reader::number(c, "grid C");
      if (!(v > 0.0)) throw ConfigError("grid C values must be > 0");
      cfg.grid.c_values.push_back(v);
    }
    for (const auto& g : split_list(r.get("grid", "gamma").value_or("scale")))
      cfg.grid.gammas.push_back(Gamma::parse(g));
  } else if (preset == "standard") {
    for (const char* key : {"kernels", "c", "gamma"})
      if (r.get("grid", key)) throw ConfigError(std::string("[grid] ") + key + " requires preset = custom");
  } else {
    throw ConfigError("unknown grid preset '" + preset + "' (standard|custom)");
  }
  if (auto v = r.get("grid", "degree")) cfg.grid.degree = Reader::integer<int>(*v, "degree");
  if (auto v = r.get("grid", "coef0")) cfg.grid.coef0 = Reader::number(*v, "coef0");
  if (cfg.grid.degree < 1) throw ConfigError("degree must be >= 1");

  if (auto v = r.get("screen", "kernel")) cfg.screen.kernel.kind = parse_kernel_kind(*v);
  if (auto v = r.get("screen", "gamma")) cfg.screen.kernel.gamma = Gamma::parse(*v);
  if (auto v = r.get("screen", "lambda")) cfg.screen.lambda = Reader::number(*v, "lambda");
  if (!(cfg.screen.lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (auto v = r.get("screen", "positions"))
    cfg.screen.positions = Reader::integer<std::size_t>(*v, "positions");

  cfg.seeds.split = Reader::integer<std::uint64_t>(r.require("seeds", "split"), "seeds.split");
  cfg.seeds.cv = Reader::integer<std::uint64_t>(r.require("seeds", "cv"), "seeds.cv");
  cfg.seeds.embedding =
      Reader::integer<std::uint64_t>(r.require("seeds", "embedding"), "seeds.embedding");
  cfg.seeds.shots = Reader::integer<std::uint64_t>(r.require("seeds", "shots"), "seeds.shots");
  cfg.embedding.seed = cfg.seeds.embedding;
  cfg.backend.shot_seed = cfg.seeds.shots;
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "dataset=" << dataset.filename().string() << '\n'
     << "embedding=" << embedding.descriptor() << '\n'
     << "backend=" << backend.descriptor() << ";cap=" << backend.statevector_cap << '\n'
     << "splits=" << n_splits << ";train_fraction=" << csv::format_double(train_fraction)
     << ";folds=" << folds << ";order=" << to_string(order) << ";arms=" << to_string(arms) << (stratify ? ";stratify" : "") << '\n'
     << "grid.kernels=";
  for (auto k : grid.kernels) os << to_string(k) << ',';
  os << "\ngrid.c=";
  for (double c : grid.c_values) os << csv::format_double(c) << ',';
  os << "\ngrid.gamma=";
  for (const auto& g : grid.gammas) os << g.str() << ',';
  os << "\ngrid.degree=" << grid.degree << ";coef0=" << csv::format_double(grid.coef0) << '\n'
     << "screen=" << screen.kernel.str() << ";lambda=" << csv::format_double(screen.lambda)
     << ";positions=" << screen.positions << '\n'
     << "seeds=" << seeds.split << ',' << seeds.cv << ',' << seeds.embedding << ',' << seeds.shots
     << '\n';
  return os.str();
}

std::string ExperimentConfig::hash() const {
  Fnv1a h;
  h.update(canonical());
  return h.hex();
}

}  // namespace pqk
