#pragma once

// In-memory run output and its on-disk layout:
//   <out>/report.json, <out>/tables/<name>.csv, <out>/plotdata/<name>.csv

#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace dfock {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
  /// Numbers as %.17g, strings quoted when they contain ',' or '"'.
  std::string csv() const;
};

struct Report {
  nlohmann::json json;
  std::map<std::string, Table> tables;
  std::map<std::string, Table> plotdata;  // x,y columns
};

/// Serialized report.json text (2-space indent, trailing newline).
std::string report_text(const Report& report);

/// Creates the directory tree and writes every file; throws Io.
void write_report(const std::string& dir, const Report& report);

}  // namespace dfock
