#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pqk/experiment.hpp"

namespace pqk {

inline constexpr const char* kVersion = "0.1.0";

/// Annotation axes of the per-position breakdown.
enum class Axis { Motif, Source, Domain, Partner };
std::string_view to_string(Axis a);
inline constexpr Axis kAxes[] = {Axis::Motif, Axis::Source, Axis::Domain, Axis::Partner};

/// Values of `axis` for the category at one position. `Empty` for padding,
/// `Terminal` for M14; a motif with several binding partners yields one value
/// per partner. Throws DataError when a library motif lacks metadata.
std::vector<std::string> annotate(const std::optional<MotifId>& category, Axis axis);

struct Counts {
  std::uint64_t correct = 0;
  std::uint64_t incorrect = 0;
  [[nodiscard]] std::uint64_t total() const { return correct + incorrect; }
  bool operator==(const Counts&) const = default;
};

/// Key (axis, position counted from 1, annotation value).
using CellKey = std::tuple<Axis, std::size_t, std::string>;

struct ArmSummary {
  std::vector<double> test_f1;
  std::vector<double> best_test_f1;
  double median = 0.0;
  double max = 0.0;
  std::map<CellKey, Counts> cells;
};

struct EvalReport {
  std::string version = kVersion;
  std::string config_hash;
  Seeds seeds;
  std::string embedding;
  std::string backend;
  std::string order;
  std::size_t n_samples = 0;
  std::uint32_t n_qubits = 0;
  std::size_t n_splits = 0;
  std::vector<std::size_t> test_sizes;
  std::map<Arm, ArmSummary> arms;
};

/// Median with the two middle values averaged for even counts.
double median(std::vector<double> v);

EvalReport build_report(const ExperimentResult& r);

struct SignificanceRow {
  CellKey cell;
  Counts original;
  Counts pqk;
  double p_value = 1.0;
  bool significant = false;
  /// Arm with the higher correct rate, or "none".
  std::string direction;
};

/// Fisher exact test of arm × correctness for every annotated cell.
/// Requires both arms in the report.
std::vector<SignificanceRow> per_motif_analysis(const EvalReport& report, double alpha = 0.01);

nlohmann::json to_json(const EvalReport& r, double alpha = 0.01);
nlohmann::json to_json(const ScreenReport& r);

/// axis,position,value,original_correct,original_incorrect,pqk_correct,pqk_incorrect,p_value,significant,direction
void write_counts_csv(std::ostream& out, const EvalReport& r, double alpha = 0.01);
/// split,arm,test_f1,best_test_f1,kernel,C,gamma,cv_f1
void write_f1_csv(std::ostream& out, const ExperimentResult& res);

}  // namespace pqk
