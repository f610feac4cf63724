#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ccgeo/report.hpp"

using ccgeo::Table;

TEST_CASE("format_g17 round-trips doubles") {
  for (double v : {1.0 / 3.0, 0.1, 1e-300, 6.02214076e23, -0.0, 3.14159265358979}) {
    const std::string s = ccgeo::format_g17(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("write_csv: header, rows, missing cells, comments") {
  Table t;
  t.columns = {"a", "b"};
  t.comments = {"note one"};
  t.rows.push_back({1.5, std::nullopt});
  t.rows.push_back({-2.0, 0.25});
  std::ostringstream os;
  ccgeo::write_csv(os, t);
  CHECK(os.str() == "# note one\na,b\n1.5,\n-2,0.25\n");
}

TEST_CASE("write_json mirrors rows as objects with nulls") {
  Table t;
  t.columns = {"a", "b"};
  t.rows.push_back({1.5, std::nullopt});
  std::ostringstream os;
  ccgeo::write_json(os, t);
  const auto doc = nlohmann::json::parse(os.str());
  REQUIRE(doc["rows"].size() == 1);
  CHECK(doc["rows"][0]["a"].get<double>() == 1.5);
  CHECK(doc["rows"][0]["b"].is_null());
}

TEST_CASE("csv and json carry identical numeric content") {
  Table t;
  t.columns = {"x", "y"};
  t.rows.push_back({1.0 / 3.0, 2.0 / 7.0});
  t.rows.push_back({1e-17, 123456.789012345});

  std::ostringstream csv_os, json_os;
  ccgeo::write_csv(csv_os, t);
  ccgeo::write_json(json_os, t);

  // parse csv back
  std::istringstream is(csv_os.str());
  std::string line;
  std::getline(is, line);  // header
  std::vector<std::vector<double>> csv_rows;
  while (std::getline(is, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    csv_rows.push_back(row);
  }
  const auto doc = nlohmann::json::parse(json_os.str());
  REQUIRE(csv_rows.size() == doc["rows"].size());
  for (size_t i = 0; i < csv_rows.size(); ++i) {
    CHECK(csv_rows[i][0] == doc["rows"][i]["x"].get<double>());
    CHECK(csv_rows[i][1] == doc["rows"][i]["y"].get<double>());
  }
}

TEST_CASE("parse_format") {
  CHECK(ccgeo::parse_format("csv") == ccgeo::OutputFormat::kCsv);
  CHECK(ccgeo::parse_format("json") == ccgeo::OutputFormat::kJson);
  CHECK_THROWS_AS(ccgeo::parse_format("xml"), std::invalid_argument);
}
