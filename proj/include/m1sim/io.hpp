#pragma once

#include <map>
#include <string>
#include <vector>

namespace m1sim::io {

// CSV with '#'-prefixed header comments. Values are printed with 17
// significant digits so repeated runs of the same build are byte-identical.
struct Table {
  std::vector<std::string> comments;             // written as "# ..."
  std::vector<std::string> columns;              // header names (with units)
  std::vector<std::vector<double>> data;         // column-major
  int precision = 17;
};

std::string format_value(double v, int precision);
void write_csv(const std::string& path, const Table& table);

// Sidecar metadata; stored as JSON next to the CSV.
void write_metadata(const std::string& path, const std::string& command,
                    const std::map<std::string, std::string>& config,
                    const std::map<std::string, std::string>& extra, double wall_seconds);

}  // namespace m1sim::io
