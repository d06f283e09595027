#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "switchcode/config.hpp"

namespace switchcode::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Flat key=value record written next to every result file.
class RunManifest {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, std::uint64_t value) { set(std::move(key), std::to_string(value)); }
  void add_file(const std::string& role, const std::filesystem::path& path, std::span<const Symbol> bytes);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  void write(std::ostream& out) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string sha256_hex(std::span<const Symbol> bytes);

// Writes `content` to `path` through a temporary file and a rename.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace switchcode::cli
