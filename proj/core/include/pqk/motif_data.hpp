#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqk/linalg.hpp"

namespace pqk {

/// Signaling motif identifier M1..M14. M14 is the terminal motif that closes
/// every construct; M1..M13 are the combinable library motifs.
class MotifId {
 public:
  static constexpr int kFirst = 1;
  static constexpr int kTerminal = 14;

  explicit MotifId(int number);

  /// Parses "M<k>" for k in 1..14; throws DataError("unknown motif id ...").
  static MotifId parse(std::string_view token);
  static MotifId terminal() { return MotifId(kTerminal); }

  [[nodiscard]] int number() const { return number_; }
  [[nodiscard]] bool is_terminal() const { return number_ == kTerminal; }
  [[nodiscard]] std::string str() const;

  auto operator<=>(const MotifId&) const = default;

 private:
  int number_;
};

/// Catalog entry for one motif (sequence data is carried as metadata only).
struct Motif {
  MotifId id;
  std::string sequence;
  std::string source_protein;
  std::vector<std::string> binding_partners;
  std::string binding_domain;
  std::string consensus;
  bool terminal = false;
};

/// The fourteen-entry motif library, ordered M1..M14.
const std::vector<Motif>& motif_catalog();
const Motif& find_motif(MotifId id);

/// One tested CAR construct: 1..3 library motifs (M14 implied) and the
/// measured Nalm6 survival fraction.
struct Construct {
  std::vector<MotifId> motifs;
  double survival = 0.0;
};

enum class Cytotoxicity { High, Low };

inline constexpr double kSurvivalThreshold = 0.62;

/// survival < 0.62 is high cytotoxicity; the boundary itself is low.
Cytotoxicity binarize_cytotoxicity(double survival);

/// +1 for high, -1 for low.
inline int signed_label(Cytotoxicity c) { return c == Cytotoxicity::High ? +1 : -1; }

std::vector<Construct> read_constructs(std::istream& in);
std::vector<Construct> load_constructs(const std::string& path);

/// Category alphabet and position count of the one-hot layout. A category is
/// a motif or `empty` (std::nullopt). Bits are position-major: position p
/// occupies [p * categories.size(), (p + 1) * categories.size()).
struct EncodingLayout {
  std::vector<std::optional<MotifId>> categories;
  std::size_t n_positions = 4;

  /// M1..M14 then empty, four positions: 60 bits.
  static EncodingLayout standard();

  [[nodiscard]] std::size_t n_categories() const { return categories.size(); }
  [[nodiscard]] std::size_t width() const { return categories.size() * n_positions; }
  [[nodiscard]] std::size_t category_index(std::optional<MotifId> c) const;
  [[nodiscard]] std::string category_name(std::size_t index) const;
  /// Column names p{position}_{category}, positions counted from 1.
  [[nodiscard]] std::vector<std::string> column_names() const;
};

struct EncodedSample {
  std::vector<std::uint8_t> bits;
  Cytotoxicity label = Cytotoxicity::Low;
};

/// Motifs left to right, then M14, then `empty` padding.
EncodedSample encode_one_hot(const Construct& c,
                             const EncodingLayout& layout = EncodingLayout::standard());

/// Inverse of encode_one_hot: the category occupying each position.
std::vector<std::optional<MotifId>> decode_positions(std::span<const std::uint8_t> bits,
                                                     const EncodingLayout& layout);

struct EncodedDataset {
  EncodingLayout layout;
  std::vector<Construct> constructs;
  std::vector<EncodedSample> samples;

  [[nodiscard]] std::size_t size() const { return samples.size(); }
  /// Row-per-sample 0/1 matrix.
  [[nodiscard]] Matrix bit_matrix() const;
  /// y_i in {+1, -1}, high -> +1.
  [[nodiscard]] std::vector<int> labels() const;
};

EncodedDataset encode_dataset(std::vector<Construct> constructs,
                              const EncodingLayout& layout = EncodingLayout::standard());

/// Encoded matrix CSV: one column per bit, final column `label` in {+1,-1}.
void write_encoded_csv(std::ostream& out, const EncodedDataset& ds);

/// A labelled feature table as read back from any of the CSV outputs whose
/// last column is `label`.
struct LabelledMatrix {
  std::vector<std::string> columns;
  Matrix features;
  std::vector<int> labels;
};
LabelledMatrix read_labelled_csv(std::istream& in);
LabelledMatrix load_labelled_csv(const std::string& path);
void write_labelled_csv(std::ostream& out, const LabelledMatrix& m);

/// Matthews correlation of two binary columns (nonzero counts as 1).
/// Returns 0 when any marginal is empty.
double matthews_corr(std::span<const double> a, std::span<const double> b);

/// Dendrogram leaf order of complete-linkage clustering of the columns of
/// `train_bits` under distance 1 - MCC.
std::vector<std::size_t> correlation_order(const Matrix& train_bits);

/// Returns a copy of `m` with columns rearranged so that new column k is old
/// column order[k].
Matrix permute_columns(const Matrix& m, std::span<const std::size_t> order);

}  // namespace pqk
