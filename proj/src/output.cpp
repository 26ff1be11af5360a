#include "fermigas/output.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "fermigas/error.hpp"
#include "json.hpp"

namespace fermigas {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw NumericalError("table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                         std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (!std::isfinite(x)) throw NumericalError("non-finite value in output");
  if (x == 0.0) return "0";  // drops the sign of -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void check_finite(const Table& t) {
  for (const auto& row : t.rows)
    for (std::size_t k = 0; k < row.size(); ++k)
      if (const double* d = std::get_if<double>(&row[k]); d && !std::isfinite(*d))
        throw NumericalError("table " + t.name + ": column " + t.columns[k] + " holds a non-finite value");
}

}  // namespace

std::string format_cell(const Cell& cell) {
  if (const double* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const long long* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return quote_csv(std::get<std::string>(cell));
}

std::string render_csv(const Table& table, const Provenance& provenance) {
  check_finite(table);
  std::string out;
  out += "# fermigas " + provenance.version + "\n";
  out += "# table: " + table.name + "\n";
  out += "# config: " + provenance.resolved_config + "\n";
  out += "# formulas:";
  for (const auto& f : table.formulas) out += " " + f;
  out += "\n";
  for (std::size_t k = 0; k < table.columns.size(); ++k) out += (k ? "," : "") + quote_csv(table.columns[k]);
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + format_cell(row[k]);
    out += "\n";
  }
  return out;
}

std::string render_json(const Table& table, const Provenance& provenance) {
  check_finite(table);
  nlohmann::ordered_json j;
  j["version"] = provenance.version;
  j["table"] = table.name;
  j["config"] = nlohmann::ordered_json::parse(provenance.resolved_config);
  j["formulas"] = table.formulas;
  j["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) std::visit([&](const auto& v) { r.push_back(v); }, c);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(1) + "\n";
}

void write_tables(const std::vector<Table>& tables, const Provenance& provenance, const std::string& directory,
                  bool json_mirror) {
  std::vector<std::pair<std::string, std::string>> files;
  std::set<std::string> names;
  for (const auto& t : tables) {
    if (!names.insert(t.name).second) throw NumericalError("duplicate table name " + t.name);
    files.emplace_back(t.name + ".csv", render_csv(t, provenance));
    if (json_mirror) files.emplace_back(t.name + ".json", render_json(t, provenance));
  }
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec || !fs::is_directory(directory)) throw IoError("cannot create output directory " + directory);
  for (const auto& [file, text] : files) {
    const fs::path path = fs::path(directory) / file;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << text;
    os.close();
    if (!os) throw IoError("failed writing " + path.string());
  }
}

}  // namespace fermigas
