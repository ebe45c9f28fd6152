#include "dfock/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dfock/errors.hpp"

namespace dfock {
namespace {

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  f << text;
  if (!f) fail(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

}  // namespace

std::string Table::csv() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += "\n";
  }
  return out;
}

std::string report_text(const Report& report) { return report.json.dump(2) + "\n"; }

void write_report(const std::string& dir, const Report& report) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path root(dir);
  fs::create_directories(root / "tables", ec);
  if (!ec) fs::create_directories(root / "plotdata", ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory '" + dir + "': " + ec.message());
  write_file(root / "report.json", report_text(report));
  for (const auto& [name, t] : report.tables) write_file(root / "tables" / (name + ".csv"), t.csv());
  for (const auto& [name, t] : report.plotdata) write_file(root / "plotdata" / (name + ".csv"), t.csv());
}

}  // namespace dfock
