#include "pqk/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <ostream>

#include "pqk/csv.hpp"
#include "pqk/errors.hpp"
#include "pqk/fisher.hpp"

namespace pqk {

std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::Motif: return "motif";
    case Axis::Source: return "source";
    case Axis::Domain: return "domain";
    case Axis::Partner: return "partner";
  }
  return "?";
}

std::vector<std::string> annotate(const std::optional<MotifId>& category, Axis axis) {
  if (!category) return {"Empty"};
  if (category->is_terminal()) return {"Terminal"};
  const auto& m = find_motif(*category);
  if (m.source_protein.empty() || m.binding_partners.empty())
    throw DataError("missing annotation metadata for motif " + category->str());
  switch (axis) {
    case Axis::Motif: return {category->str()};
    case Axis::Source: return {m.source_protein};
    case Axis::Domain: return {m.binding_domain.empty() ? "None" : m.binding_domain};
    case Axis::Partner: return m.binding_partners;
  }
  return {};
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

EvalReport build_report(const ExperimentResult& r) {
  EvalReport rep;
  rep.config_hash = r.config.hash();
  rep.seeds = r.config.seeds;
  rep.embedding = r.config.embedding.descriptor();
  rep.backend = r.config.backend.descriptor();
  rep.order = std::string(to_string(r.config.order));
  rep.n_samples = r.data.size();
  rep.n_qubits = r.n_qubits;
  rep.n_splits = r.plan.splits.size();
  for (const auto& s : r.plan.splits) rep.test_sizes.push_back(s.test.size());

  const auto y = r.data.labels();
  std::vector<std::vector<std::optional<MotifId>>> positions;
  positions.reserve(r.data.size());
  for (const auto& s : r.data.samples) positions.push_back(decode_positions(s.bits, r.data.layout));

  auto accumulate = [&](Arm arm, const ArmOutcome& o, const Split& split) {
    auto& summary = rep.arms[arm];
    summary.test_f1.push_back(o.test_f1);
    summary.best_test_f1.push_back(o.best_test_f1);
    for (std::size_t k = 0; k < split.test.size(); ++k) {
      const std::size_t i = split.test[k];
      const bool ok = o.predictions[k] == y[i];
      for (std::size_t p = 0; p < positions[i].size(); ++p)
        for (Axis axis : kAxes)
          for (auto& value : annotate(positions[i][p], axis)) {
            auto& c = summary.cells[{axis, p + 1, std::move(value)}];
            (ok ? c.correct : c.incorrect) += 1;
          }
    }
  };

  for (std::size_t s = 0; s < r.outcomes.size(); ++s) {
    const auto& o = r.outcomes[s];
    if (o.original) accumulate(Arm::Original, *o.original, r.plan.splits[s]);
    if (o.pqk) accumulate(Arm::Pqk, *o.pqk, r.plan.splits[s]);
  }
  for (auto& [arm, summary] : rep.arms) {
    summary.median = median(summary.test_f1);
    summary.max = *std::max_element(summary.test_f1.begin(), summary.test_f1.end());
  }
  return rep;
}

std::vector<SignificanceRow> per_motif_analysis(const EvalReport& report, double alpha) {
  const auto o = report.arms.find(Arm::Original);
  const auto q = report.arms.find(Arm::Pqk);
  if (o == report.arms.end() || q == report.arms.end())
    throw DataError("per-motif analysis needs counts for both the original and pqk arms");

  std::map<CellKey, std::pair<Counts, Counts>> merged;
  for (const auto& [key, c] : o->second.cells) merged[key].first = c;
  for (const auto& [key, c] : q->second.cells) merged[key].second = c;

  std::vector<SignificanceRow> rows;
  rows.reserve(merged.size());
  for (const auto& [key, pair] : merged) {
    const auto& [orig, pqk] = pair;
    SignificanceRow row;
    row.cell = key;
    row.original = orig;
    row.pqk = pqk;
    row.p_value = fisher_exact({{{pqk.correct, pqk.incorrect}, {orig.correct, orig.incorrect}}});
    row.significant = row.p_value < alpha;
    // Compare correct rates pqk.c/pqk.n vs orig.c/orig.n without dividing.
    const auto lhs = static_cast<long double>(pqk.correct) * orig.total();
    const auto rhs = static_cast<long double>(orig.correct) * pqk.total();
    row.direction = lhs > rhs ? "pqk" : rhs > lhs ? "original" : "none";
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const EvalReport& r, double alpha) {
  using nlohmann::json;
  json j;
  j["provenance"] = {{"version", r.version},
                     {"config_hash", r.config_hash},
                     {"seeds",
                      {{"split", r.seeds.split},
                       {"cv", r.seeds.cv},
                       {"embedding", r.seeds.embedding},
                       {"shots", r.seeds.shots}}},
                     {"embedding", r.embedding},
                     {"backend", r.backend},
                     {"order", r.order}};
  j["n_samples"] = r.n_samples;
  j["n_qubits"] = r.n_qubits;
  j["n_splits"] = r.n_splits;
  j["test_sizes"] = r.test_sizes;

  json arms = json::object();
  for (const auto& [arm, s] : r.arms) {
    json cells = json::array();
    for (const auto& [key, c] : s.cells)
      cells.push_back({{"axis", to_string(std::get<0>(key))},
                       {"position", std::get<1>(key)},
                       {"value", std::get<2>(key)},
                       {"correct", c.correct},
                       {"incorrect", c.incorrect}});
    arms[std::string(to_string(arm))] = {{"test_f1", s.test_f1},
                                         {"best_test_f1", s.best_test_f1},
                                         {"median_f1", s.median},
                                         {"max_f1", s.max},
                                         {"median_best_test_f1", median(s.best_test_f1)},
                                         {"cells", cells}};
  }
  j["arms"] = arms;

  if (r.arms.size() == 2) {
    json sig = json::array();
    for (const auto& row : per_motif_analysis(r, alpha))
      if (row.significant)
        sig.push_back({{"axis", to_string(std::get<0>(row.cell))},
                       {"position", std::get<1>(row.cell)},
                       {"value", std::get<2>(row.cell)},
                       {"p_value", row.p_value},
                       {"direction", row.direction}});
    j["significant_cells"] = sig;
    j["alpha"] = alpha;
  }
  return j;
}

nlohmann::json to_json(const ScreenReport& r) {
  using nlohmann::json;
  auto point = [](const ScreenPoint& p) {
    return json{{"lambda", p.lambda}, {"g_cq", p.g_cq}, {"s_c", p.s_c}, {"s_q", p.s_q}};
  };
  json sweep = json::array();
  for (const auto& p : r.sweep) sweep.push_back(point(p));
  return {{"n", r.n},
          {"sqrt_n", r.sqrt_n},
          {"kernel", r.kernel},
          {"result", point(r.at)},
          {"sweep", sweep},
          {"separation", r.separation},
          {"complexity_gap", r.complexity_gap},
          {"verdict", r.verdict}};
}

void write_counts_csv(std::ostream& out, const EvalReport& r, double alpha) {
  out << "axis,position,value,original_correct,original_incorrect,pqk_correct,pqk_incorrect,"
         "p_value,significant,direction\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  auto key_cols = [&](const CellKey& k) {
    return std::string(to_string(std::get<0>(k))) + ',' + std::to_string(std::get<1>(k)) + ',' +
           quote(std::get<2>(k));
  };

  if (r.arms.size() == 2) {
    for (const auto& row : per_motif_analysis(r, alpha))
      out << key_cols(row.cell) << ',' << row.original.correct << ',' << row.original.incorrect
          << ',' << row.pqk.correct << ',' << row.pqk.incorrect << ','
          << csv::format_double(row.p_value) << ',' << (row.significant ? 1 : 0) << ','
          << row.direction << '\n';
    return;
  }
  for (const auto& [arm, s] : r.arms)
    for (const auto& [key, c] : s.cells) {
      out << key_cols(key) << ',';
      if (arm == Arm::Original) out << c.correct << ',' << c.incorrect << ",,,";
      else out << ",," << c.correct << ',' << c.incorrect << ',';
      out << ",,\n";
    }
}

void write_f1_csv(std::ostream& out, const ExperimentResult& res) {
  out << "split,arm,test_f1,best_test_f1,kernel,C,gamma,cv_f1\n";
  for (std::size_t s = 0; s < res.outcomes.size(); ++s) {
    auto row = [&](Arm arm, const ArmOutcome& o) {
      const auto& cand = o.chosen.candidate;
      out << s << ',' << to_string(arm) << ',' << csv::format_double(o.test_f1) << ','
          << csv::format_double(o.best_test_f1) << ',' << to_string(cand.spec.kind) << ','
          << csv::format_double(cand.c) << ','
          << (cand.spec.kind == KernelKind::Linear ? std::string("-") : cand.spec.gamma.str())
          << ',' << csv::format_double(o.chosen.mean) << '\n';
    };
    if (res.outcomes[s].original) row(Arm::Original, *res.outcomes[s].original);
    if (res.outcomes[s].pqk) row(Arm::Pqk, *res.outcomes[s].pqk);
  }
}

}  // namespace pqk
