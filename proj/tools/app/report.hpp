#pragma once

#include "app/config.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace iondfs::app {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool plot = false;  // two-column (x, y) data, CSV only
};

struct Report {
  Command command = Command::Simulate;
  std::string summary;
  std::vector<Table> tables;
};

/// "%.17g" for doubles, decimal for integers, strings verbatim.
std::string format_cell(const Cell& cell);

std::string to_csv(const Table& table, const std::string& metadata = {});
std::string to_json(const Table& table, Command command);

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Writes every table as <directory>/<prefix>_<name>.csv and/or .json.
/// Returns the written paths in order.
std::vector<std::filesystem::path> emit_report(const Report& report, const RunConfig& config);

}  // namespace iondfs::app
