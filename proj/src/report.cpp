#include "ccgeo/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace ccgeo {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const Table& table) {
  for (const auto& c : table.comments) os << "# " << c << "\n";
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i) os << ",";
    os << table.columns[i];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      if (row[i]) os << format_g17(*row[i]);
    }
    os << "\n";
  }
}

void write_json(std::ostream& os, const Table& table) {
  nlohmann::ordered_json doc;
  doc["comments"] = table.comments;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      if (row[i])
        obj[table.columns[i]] = *row[i];
      else
        obj[table.columns[i]] = nullptr;
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << "\n";
}

void write_table(const std::string& path, const Table& table, OutputFormat format) {
  auto emit = [&](std::ostream& os) {
    if (format == OutputFormat::kCsv)
      write_csv(os, table);
    else
      write_json(os, table);
  };
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  emit(os);
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw std::invalid_argument("unknown output format: " + name);
}

}  // namespace ccgeo
