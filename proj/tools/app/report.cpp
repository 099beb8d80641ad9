#include "app/report.hpp"

#include "iondfs/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <system_error>
#include <unistd.h>

namespace iondfs::app {

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  return std::get<std::string>(cell);
}

std::string to_csv(const Table& table, const std::string& metadata) {
  std::string out;
  if (!metadata.empty()) out += "# " + metadata + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_cell(row[c]);
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table, Command command) {
  nlohmann::ordered_json j;
  j["command"] = to_string(command);
  j["table"] = table.name;
  j["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) std::visit([&](const auto& v) { r.push_back(v); }, cell);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot move report into " + path.string());
  }
}

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<std::filesystem::path> emit_report(const Report& report, const RunConfig& config) {
  const std::string metadata = config.metadata ? "generated " + timestamp() : std::string();
  const std::filesystem::path dir(config.directory);
  std::vector<std::filesystem::path> written;
  for (const auto& table : report.tables) {
    const std::string stem = config.prefix + "_" + table.name;
    if (table.plot || config.format != OutputFormat::Json) {
      written.push_back(dir / (stem + ".csv"));
      write_atomic(written.back(), to_csv(table, metadata));
    }
    if (!table.plot && config.format != OutputFormat::Csv) {
      written.push_back(dir / (stem + ".json"));
      write_atomic(written.back(), to_json(table, report.command));
    }
  }
  return written;
}

}  // namespace iondfs::app
