#pragma once

#include <string>
#include <variant>
#include <vector>

namespace fermigas {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> formulas;  // identifiers of the relations the rows exercise

  void add_row(std::vector<Cell> row);
};

struct Provenance {
  std::string version;
  std::string resolved_config;  // compact JSON
};

// Shortest round-trip text for a finite double; throws NumericalError otherwise.
std::string format_number(double x);
std::string format_cell(const Cell& cell);

// "# " header block (version, config, formulas), column line, rows. No timestamps.
std::string render_csv(const Table& table, const Provenance& provenance);
std::string render_json(const Table& table, const Provenance& provenance);

// Writes every file or none: all texts are rendered before the first write. Throws IoError.
void write_tables(const std::vector<Table>& tables, const Provenance& provenance, const std::string& directory,
                  bool json_mirror);

}  // namespace fermigas
