#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ccgeo {

enum class OutputFormat { kCsv, kJson };

/// Plain numeric table: the common shape of every CLI output. Missing values
/// (empty optionals) become empty CSV cells / JSON nulls. Comments are
/// emitted as leading '#' lines in CSV and a "comments" array in JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
  std::vector<std::string> comments;
};

/// 17 significant digits: round-trip safe for doubles.
std::string format_g17(double v);

void write_csv(std::ostream& os, const Table& table);
void write_json(std::ostream& os, const Table& table);

/// Writes to the path, or to stdout when the path is empty.
void write_table(const std::string& path, const Table& table, OutputFormat format);

OutputFormat parse_format(const std::string& name);

}  // namespace ccgeo
