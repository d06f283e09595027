#pragma once

#include <absl/container/flat_hash_map.h>

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "switchcode/config.hpp"

namespace switchcode {

// Phrase = phrase `prefix` (0 is the empty phrase, i >= 1 the i-th phrase)
// followed by `literal`.
struct LzPhrase {
  std::uint32_t prefix = 0;
  Symbol literal = 0;

  bool operator==(const LzPhrase&) const = default;
};

struct LzParse {
  std::vector<LzPhrase> phrases;
  double code_bits = 0.0;
};

// Incremental LZ78 parser. Phrase i costs log2(i) + log2(D) bits: a pointer
// to one of the i earlier phrases (the empty phrase included) plus a literal.
// An unfinished trailing phrase is charged as one more phrase.
class LzCoder {
 public:
  explicit LzCoder(int alphabet) : alphabet_(alphabet), literal_bits_(std::log2(static_cast<double>(alphabet))) {
    if (alphabet < 2 || alphabet > kMaxAlphabet) throw ConfigError("alphabet size must be in [2, 256]");
    phrases_.push_back({});  // empty phrase
  }

  void push(Symbol a) {
    if (a >= alphabet_) throw InputError("symbol outside alphabet");
    ++consumed_;
    const auto it = trie_.find(key(current_, a));
    if (it != trie_.end()) {
      current_ = it->second;
      return;
    }
    const auto index = static_cast<std::uint32_t>(phrases_.size());
    phrases_.push_back({current_, a});
    trie_.emplace(key(current_, a), index);
    complete_bits_ += std::log2(static_cast<double>(index)) + literal_bits_;
    current_ = 0;
  }

  std::uint64_t consumed() const { return consumed_; }
  std::size_t phrase_count() const { return phrases_.size() - 1 + (current_ != 0 ? 1 : 0); }

  double code_length_bits() const {
    if (current_ == 0) return complete_bits_;
    return complete_bits_ + std::log2(static_cast<double>(phrases_.size())) + literal_bits_;
  }

  // The trailing partial match equals an existing phrase, so it is emitted
  // as that phrase's (prefix, literal) pair again.
  LzParse parse() const {
    LzParse result;
    result.phrases.assign(phrases_.begin() + 1, phrases_.end());
    if (current_ != 0) result.phrases.push_back(phrases_[current_]);
    result.code_bits = code_length_bits();
    return result;
  }

 private:
  static std::uint64_t key(std::uint32_t phrase, Symbol a) { return (static_cast<std::uint64_t>(phrase) << 8) | a; }

  int alphabet_;
  double literal_bits_;
  std::vector<LzPhrase> phrases_;
  absl::flat_hash_map<std::uint64_t, std::uint32_t> trie_;
  std::uint32_t current_ = 0;
  double complete_bits_ = 0.0;
  std::uint64_t consumed_ = 0;
};

inline LzParse lz_parse(std::span<const Symbol> z, int alphabet) {
  if (z.empty()) throw InputError("LZ code length of an empty sequence");
  LzCoder coder(alphabet);
  for (Symbol a : z) coder.push(a);
  return coder.parse();
}

inline double lz_code_length(std::span<const Symbol> z, int alphabet) { return lz_parse(z, alphabet).code_bits; }

inline std::vector<Symbol> lz_decode(const LzParse& parse) {
  std::vector<std::vector<Symbol>> dictionary(1);
  std::vector<Symbol> out;
  for (const LzPhrase& phrase : parse.phrases) {
    if (phrase.prefix >= dictionary.size()) throw InputError("phrase refers to a later phrase");
    std::vector<Symbol> text = dictionary[phrase.prefix];
    text.push_back(phrase.literal);
    out.insert(out.end(), text.begin(), text.end());
    dictionary.push_back(std::move(text));
  }
  return out;
}

}  // namespace switchcode
