#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pqk::csv {

/// A parsed CSV file: header plus data rows, every row split on commas.
/// Quoting is not supported; none of the formats used here need it.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split_line(std::string_view line);

/// Reads a header-first CSV. Blank lines are skipped, CRLF tolerated,
/// a UTF-8 BOM on the first line is stripped.
Table read(std::istream& in);
Table read_file(const std::string& path);

/// Shortest round-trippable decimal representation.
std::string format_double(double v);

double parse_double(std::string_view text);

}  // namespace pqk::csv
