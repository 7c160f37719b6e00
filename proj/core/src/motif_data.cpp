#include "pqk/motif_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "pqk/csv.hpp"
#include "pqk/errors.hpp"

namespace pqk {

MotifId::MotifId(int number) : number_(number) {
  if (number < kFirst || number > kTerminal)
    throw DataError("unknown motif id 'M" + std::to_string(number) + "'");
}

MotifId MotifId::parse(std::string_view token) {
  int n = 0;
  if (token.size() >= 2 && token.front() == 'M') {
    auto [ptr, ec] = std::from_chars(token.data() + 1, token.data() + token.size(), n);
    if (ec == std::errc{} && ptr == token.data() + token.size() && n >= kFirst && n <= kTerminal)
      return MotifId(n);
  }
  throw DataError("unknown motif id '" + std::string(token) + "'");
}

std::string MotifId::str() const { return "M" + std::to_string(number_); }

const std::vector<Motif>& motif_catalog() {
  static const std::vector<Motif> catalog = {
      {MotifId(1), "DYHNPGYLVLPDSTP", "LAT", {"PLCγ1"}, "SH2", "Yx(A/I/L/V)(A/F/I/L/V/W/Y/P)"},
      {MotifId(2), "EELDENYVPMNPNSPP", "Gab1", {"PI3K"}, "SH2", "YxxM"},
      {MotifId(3), "EEGAPDYENLQELNHP", "LAT", {"Grb2"}, "SH2", "YXNX"},
      {MotifId(4), "LGSNQEEAYVTMSSFYQNQ", "IL7Rα", {"PI3K", "Grb2"}, "SH2", "YxxM, YxNx"},
      {MotifId(5), "LPMDEVYESPFADEEIR", "SYK", {"Vav1"}, "SH2", "Y(M/L/E)xP"},
      {MotifId(6), "KPMAESITYAAVARHSAG", "LAIR1", {"SHP-1", "SHP-2"}, "SH2", "(S/I/V/L)xYxx(I/V/L)"},
      {MotifId(7), "LPTWSTPVQPMALIVLG", "CD4", {"Lck"}, "SH3", "PxxPx(R/K)"},
      {MotifId(8), "PAPSIDRSTKPPLDRSL", "SLP76", {"GADS"}, "SH3", "RxxK"},
      {MotifId(9), "GSNTAAPVQETLHGCQ", "CD40", {"TRAF2", "TRAF1"}, "TRAF-C", "Px(Q/E)E"},
      {MotifId(10), "DDSLPHPQQATDDSGHES", "LMP1", {"TRAF2", "TRAF1"}, "TRAF-C",
       "Px(Q/E)xxD, Px(Q/E)xT"},
      {MotifId(11), "KAPHAKQEPQEINFPDDL", "CD40", {"TRAF6"}, "TRAF-C", "PxExxZ"},
      {MotifId(12), "GSGPGSRPTAVEGLALGSS", "IRAK1", {"Pellino protein", "TIFA"}, "FHA",
       "Txx(E/D), Txx(I/L/V)"},
      {MotifId(13), "SAGSAGSAGSAGSAGSAG", "Synthetic", {"Non-functional spacer"}, "", ""},
      {MotifId(14), "", "", {}, "", "", true},
  };
  return catalog;
}

const Motif& find_motif(MotifId id) {
  return motif_catalog().at(static_cast<std::size_t>(id.number() - MotifId::kFirst));
}

Cytotoxicity binarize_cytotoxicity(double survival) {
  if (!(survival >= 0.0 && survival <= 1.0))
    throw DataError("survival fraction outside [0,1]: " + csv::format_double(survival));
  return survival < kSurvivalThreshold ? Cytotoxicity::High : Cytotoxicity::Low;
}

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

std::vector<Construct> read_constructs(std::istream& in) {
  const auto table = csv::read(in);
  const std::vector<std::string> expected = {"pos1", "pos2", "pos3", "cytotoxicity"};
  std::vector<std::string> header;
  for (const auto& h : table.header) header.push_back(trim(h));
  if (header != expected)
    throw DataError("construct CSV header must be 'pos1,pos2,pos3,cytotoxicity'");

  std::vector<Construct> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "row " + std::to_string(r + 1);
    if (row.size() != expected.size())
      throw DataError(where + ": expected 4 fields, found " + std::to_string(row.size()));

    Construct c;
    bool gap = false;
    for (std::size_t p = 0; p < 3; ++p) {
      const auto token = trim(row[p]);
      if (token.empty()) {
        gap = true;
        continue;
      }
      if (gap) throw DataError(where + ": motif follows an empty position");
      MotifId id = [&] {
        try {
          return MotifId::parse(token);
        } catch (const DataError& e) {
          throw DataError(where + ": " + e.what());
        }
      }();
      if (id.is_terminal())
        throw DataError(where + ": unknown motif id '" + token +
                        "' (terminal motif is implied, list M1..M13 only)");
      c.motifs.push_back(id);
    }
    if (c.motifs.empty()) throw DataError(where + ": construct has no motifs");
    try {
      c.survival = csv::parse_double(row[3]);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    if (!(c.survival >= 0.0 && c.survival <= 1.0))
      throw DataError(where + ": survival fraction outside [0,1]: " + trim(row[3]));
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Construct> load_constructs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open construct file '" + path + "'");
  return read_constructs(in);
}

EncodingLayout EncodingLayout::standard() {
  EncodingLayout l;
  for (int m = MotifId::kFirst; m <= MotifId::kTerminal; ++m) l.categories.emplace_back(MotifId(m));
  l.categories.emplace_back(std::nullopt);
  l.n_positions = 4;
  return l;
}

std::size_t EncodingLayout::category_index(std::optional<MotifId> c) const {
  auto it = std::find(categories.begin(), categories.end(), c);
  if (it == categories.end())
    throw DataError("category '" + (c ? c->str() : std::string("empty")) +
                    "' is not part of the encoding layout");
  return static_cast<std::size_t>(it - categories.begin());
}

std::string EncodingLayout::category_name(std::size_t index) const {
  const auto& c = categories.at(index);
  return c ? c->str() : std::string("empty");
}

std::vector<std::string> EncodingLayout::column_names() const {
  std::vector<std::string> names;
  names.reserve(width());
  for (std::size_t p = 0; p < n_positions; ++p)
    for (std::size_t k = 0; k < categories.size(); ++k)
      names.push_back("p" + std::to_string(p + 1) + "_" + category_name(k));
  return names;
}

EncodedSample encode_one_hot(const Construct& c, const EncodingLayout& layout) {
  if (c.motifs.empty()) throw DataError("construct has no motifs");
  if (c.motifs.size() + 1 > layout.n_positions)
    throw DataError("construct has " + std::to_string(c.motifs.size()) + " motifs; at most " +
                    std::to_string(layout.n_positions - 1) + " fit before the terminal motif");

  EncodedSample s;
  s.bits.assign(layout.width(), 0);
  s.label = binarize_cytotoxicity(c.survival);
  const std::size_t stride = layout.n_categories();
  for (std::size_t p = 0; p < layout.n_positions; ++p) {
    std::optional<MotifId> cat;
    if (p < c.motifs.size())
      cat = c.motifs[p];
    else if (p == c.motifs.size())
      cat = MotifId::terminal();
    s.bits[p * stride + layout.category_index(cat)] = 1;
  }
  return s;
}

std::vector<std::optional<MotifId>> decode_positions(std::span<const std::uint8_t> bits,
                                                     const EncodingLayout& layout) {
  if (bits.size() != layout.width()) throw DataError("bit vector width does not match layout");
  const std::size_t stride = layout.n_categories();
  std::vector<std::optional<MotifId>> out;
  for (std::size_t p = 0; p < layout.n_positions; ++p) {
    std::size_t set = 0;
    std::size_t which = 0;
    for (std::size_t k = 0; k < stride; ++k) {
      if (bits[p * stride + k]) {
        ++set;
        which = k;
      }
    }
    if (set != 1)
      throw DataError("position " + std::to_string(p + 1) + " does not hold exactly one category");
    out.push_back(layout.categories[which]);
  }
  return out;
}

Matrix EncodedDataset::bit_matrix() const {
  Matrix m(samples.size(), layout.width());
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < layout.width(); ++j) m(i, j) = samples[i].bits[j];
  return m;
}

std::vector<int> EncodedDataset::labels() const {
  std::vector<int> y;
  y.reserve(samples.size());
  for (const auto& s : samples) y.push_back(signed_label(s.label));
  return y;
}

EncodedDataset encode_dataset(std::vector<Construct> constructs, const EncodingLayout& layout) {
  EncodedDataset ds{layout, std::move(constructs), {}};
  ds.samples.reserve(ds.constructs.size());
  for (const auto& c : ds.constructs) ds.samples.push_back(encode_one_hot(c, layout));
  return ds;
}

void write_encoded_csv(std::ostream& out, const EncodedDataset& ds) {
  LabelledMatrix m{ds.layout.column_names(), ds.bit_matrix(), ds.labels()};
  write_labelled_csv(out, m);
}

LabelledMatrix read_labelled_csv(std::istream& in) {
  const auto table = csv::read(in);
  if (table.header.size() < 2 || table.header.back() != "label")
    throw DataError("labelled CSV needs at least one feature column and a final 'label' column");
  LabelledMatrix m;
  m.columns.assign(table.header.begin(), table.header.end() - 1);
  m.features = Matrix(table.rows.size(), m.columns.size());
  m.labels.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size())
      throw DataError("row " + std::to_string(r + 1) + ": expected " +
                      std::to_string(table.header.size()) + " fields");
    for (std::size_t j = 0; j < m.columns.size(); ++j) {
      try {
        m.features(r, j) = csv::parse_double(row[j]);
      } catch (const DataError& e) {
        throw DataError("row " + std::to_string(r + 1) + ": " + e.what());
      }
    }
    const auto label = trim(row.back());
    if (label == "1" || label == "+1")
      m.labels.push_back(+1);
    else if (label == "-1")
      m.labels.push_back(-1);
    else
      throw DataError("row " + std::to_string(r + 1) + ": label must be +1 or -1");
  }
  return m;
}

LabelledMatrix load_labelled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_labelled_csv(in);
}

void write_labelled_csv(std::ostream& out, const LabelledMatrix& m) {
  for (const auto& c : m.columns) out << c << ',';
  out << "label\n";
  for (std::size_t i = 0; i < m.features.rows(); ++i) {
    for (double v : m.features.row(i)) out << csv::format_double(v) << ',';
    out << (m.labels[i] > 0 ? "+1" : "-1") << '\n';
  }
}

double matthews_corr(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("matthews_corr: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("matthews_corr: need at least two observations");
  std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool x = a[i] != 0.0;
    const bool y = b[i] != 0.0;
    if (x && y) ++tp;
    else if (!x && !y) ++tn;
    else if (x) ++fp;
    else ++fn;
  }
  const double denom = static_cast<double>(tp + fp) * static_cast<double>(tp + fn) *
                       static_cast<double>(tn + fp) * static_cast<double>(tn + fn);
  if (denom == 0.0) return 0.0;
  const double num = static_cast<double>(tp * tn - fp * fn);
  return num / std::sqrt(denom);
}

std::vector<std::size_t> correlation_order(const Matrix& train_bits) {
  const std::size_t d = train_bits.cols();
  if (d < 2) throw std::invalid_argument("correlation_order needs at least two features");

  std::vector<std::vector<double>> columns(d);
  for (std::size_t j = 0; j < d; ++j) columns[j] = train_bits.col(j);

  // Cluster ids: leaves 0..d-1, merges d, d+1, ... (same numbering as a
  // standard linkage matrix). dist is indexed by cluster id.
  const std::size_t total = 2 * d - 1;
  std::vector<std::vector<double>> dist(total, std::vector<double>(total, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double v = 1.0 - matthews_corr(columns[i], columns[j]);
      dist[i][j] = dist[j][i] = v;
    }

  std::vector<std::pair<std::size_t, std::size_t>> children(total, {0, 0});
  std::vector<std::size_t> active(d);
  std::iota(active.begin(), active.end(), 0);

  for (std::size_t next = d; next < total; ++next) {
    // active stays sorted by cluster id, so the first strict minimum found in
    // row-major order is the lexicographically smallest tied pair.
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double v = dist[active[a]][active[b]];
        if (v < best) {
          best = v;
          bi = a;
          bj = b;
        }
      }
    const std::size_t ci = active[bi];
    const std::size_t cj = active[bj];
    children[next] = {ci, cj};
    for (std::size_t k : active) {
      if (k == ci || k == cj) continue;
      const double v = std::max(dist[ci][k], dist[cj][k]);
      dist[next][k] = dist[k][next] = v;
    }
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bi));
    active.push_back(next);
  }

  std::vector<std::size_t> order;
  order.reserve(d);
  std::vector<std::size_t> stack{total - 1};
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    if (c < d) {
      order.push_back(c);
    } else {
      stack.push_back(children[c].second);
      stack.push_back(children[c].first);
    }
  }
  return order;
}

Matrix permute_columns(const Matrix& m, std::span<const std::size_t> order) {
  if (order.size() != m.cols()) throw std::invalid_argument("permutation width mismatch");
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < order.size(); ++k) out(i, k) = m(i, order[k]);
  return out;
}

}  // namespace pqk
