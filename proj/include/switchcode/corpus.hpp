#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "switchcode/config.hpp"

namespace switchcode {

// Raw bytes of a file; no decoding.
inline std::vector<Symbol> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<Symbol> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw InputError("failed reading " + path.string());
  return data;
}

inline constexpr int kLetterAlphabet = 27;

// Lowercase letters a-z map to 0..25; every run of other bytes becomes one
// separator symbol 26.
inline std::vector<Symbol> to_letter_alphabet(std::span<const Symbol> bytes) {
  std::vector<Symbol> out;
  out.reserve(bytes.size());
  for (Symbol b : bytes) {
    if (b >= 'A' && b <= 'Z') b = static_cast<Symbol>(b - 'A' + 'a');
    if (b >= 'a' && b <= 'z') {
      out.push_back(static_cast<Symbol>(b - 'a'));
    } else if (out.empty() || out.back() != 26) {
      out.push_back(26);
    }
  }
  return out;
}

inline void check_alphabet(std::span<const Symbol> data, int alphabet) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i] >= alphabet) {
      throw InputError("symbol " + std::to_string(data[i]) + " at offset " + std::to_string(i) +
                       " outside alphabet of size " + std::to_string(alphabet));
    }
  }
}

}  // namespace switchcode
