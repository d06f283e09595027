#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "switchcode/analysis.hpp"
#include "switchcode/corpus.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(SWITCHCODE_TEST_DATA) + "/" + name; }

// Columns of a numeric CSV with a header row, keyed by header name.
inline std::map<std::string, std::vector<double>> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture " + path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> names;
  std::stringstream header(line);
  for (std::string cell; std::getline(header, cell, ',');) names.push_back(cell);
  std::map<std::string, std::vector<double>> table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::size_t i = 0;
    for (std::string cell; std::getline(row, cell, ','); ++i) table[names.at(i)].push_back(std::stod(cell));
  }
  return table;
}

inline std::vector<switchcode::PowerLawPoint> column_points(const std::map<std::string, std::vector<double>>& table,
                                                            const std::string& column) {
  const auto& n = table.at("n");
  const auto& y = table.at(column);
  std::vector<switchcode::PowerLawPoint> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back({n[i], y[i]});
  return out;
}

}  // namespace fixtures
