#include "m1sim/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace m1sim::io {

std::string format_value(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

void write_csv(const std::string& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const std::string& c : table.comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "");
  out << "\n";
  const std::size_t rows = table.data.empty() ? 0 : table.data.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < table.data.size(); ++c)
      out << format_value(table.data[c][r], table.precision)
          << (c + 1 < table.data.size() ? "," : "");
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_metadata(const std::string& path, const std::string& command,
                    const std::map<std::string, std::string>& config,
                    const std::map<std::string, std::string>& extra, double wall_seconds) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config;
  for (const auto& [k, v] : extra) j[k] = v;
  j["wall_seconds"] = wall_seconds;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace m1sim::io
