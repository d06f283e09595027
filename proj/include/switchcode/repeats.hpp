#pragma once

#include <absl/container/flat_hash_map.h>

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "switchcode/config.hpp"

namespace switchcode {

struct DepthResult {
  std::size_t depth = 0;
  std::size_t offset = 0;  // start of the witness in the input
  std::vector<Symbol> witness;
};

namespace detail {

// Suffix automaton with hashed transitions. Out-edges are also threaded into
// per-state linked lists so a clone can copy them.
class SuffixAutomaton {
 public:
  explicit SuffixAutomaton(std::size_t expected_length) {
    const std::size_t capacity = 2 * expected_length + 2;
    len_.reserve(capacity);
    link_.reserve(capacity);
    end_pos_.reserve(capacity);
    hits_.reserve(capacity);
    edge_head_.reserve(capacity);
    next_.reserve(capacity);
    add_state(0, -1, -1, 0);
  }

  void extend(Symbol a, int pos) {
    const int cur = add_state(len_[last_] + 1, 0, pos, 1);
    int p = last_;
    while (p != -1 && !next_.contains(key(p, a))) {
      set_edge(p, a, cur);
      p = link_[p];
    }
    if (p != -1) {
      const int q = next_.at(key(p, a));
      if (len_[p] + 1 == len_[q]) {
        link_[cur] = q;
      } else {
        const int clone = add_state(len_[p] + 1, link_[q], end_pos_[q], 0);
        for (int e = edge_head_[q]; e != -1; e = edge_link_[e]) {
          set_edge(clone, edge_symbol_[e], next_.at(key(q, edge_symbol_[e])));
        }
        for (; p != -1; p = link_[p]) {
          auto it = next_.find(key(p, a));
          if (it == next_.end() || it->second != q) break;
          it->second = clone;
        }
        link_[q] = clone;
        link_[cur] = clone;
      }
    }
    last_ = cur;
  }

  // Longest state whose end-position set has at least two elements.
  DepthResult deepest_repeat(std::span<const Symbol> z) {
    const int states = static_cast<int>(len_.size());
    // counting sort by length, then push occurrence counts up suffix links
    std::vector<int> bucket(z.size() + 2, 0);
    for (int v = 0; v < states; ++v) ++bucket[len_[v]];
    for (std::size_t l = 1; l < bucket.size(); ++l) bucket[l] += bucket[l - 1];
    std::vector<int> order(len_.size());
    for (int v = states - 1; v >= 0; --v) order[--bucket[len_[v]]] = v;
    for (int i = states - 1; i > 0; --i) hits_[link_[order[i]]] += hits_[order[i]];

    DepthResult result;
    int best = 0;
    for (int v = 1; v < states; ++v) {
      if (hits_[v] >= 2 && len_[v] > len_[best]) best = v;
    }
    if (best != 0) {
      result.depth = static_cast<std::size_t>(len_[best]);
      result.offset = static_cast<std::size_t>(end_pos_[best]) + 1 - result.depth;
      const auto first = z.begin() + static_cast<std::ptrdiff_t>(result.offset);
      result.witness.assign(first, first + static_cast<std::ptrdiff_t>(result.depth));
    }
    return result;
  }

 private:
  static std::uint64_t key(int state, Symbol a) { return (static_cast<std::uint64_t>(state) << 8) | a; }

  int add_state(int length, int suffix_link, int pos, std::uint32_t hits) {
    len_.push_back(length);
    link_.push_back(suffix_link);
    end_pos_.push_back(pos);
    hits_.push_back(hits);
    edge_head_.push_back(-1);
    return static_cast<int>(len_.size()) - 1;
  }

  void set_edge(int from, Symbol a, int to) {
    auto [it, inserted] = next_.try_emplace(key(from, a), to);
    if (!inserted) {
      it->second = to;
      return;
    }
    edge_symbol_.push_back(a);
    edge_link_.push_back(edge_head_[from]);
    edge_head_[from] = static_cast<int>(edge_symbol_.size()) - 1;
  }

  std::vector<int> len_, link_, end_pos_;
  std::vector<std::uint32_t> hits_;
  std::vector<int> edge_head_, edge_link_;
  std::vector<Symbol> edge_symbol_;
  absl::flat_hash_map<std::uint64_t, int> next_;
  int last_ = 0;
};

}  // namespace detail

// Depth of z: length of the longest substring occurring at least twice,
// overlaps allowed. Expected O(|z|).
inline DepthResult max_repeat_length(std::span<const Symbol> z) {
  if (z.size() < 2) return {};
  if (z.size() > static_cast<std::size_t>(std::numeric_limits<int>::max() / 2 - 2)) {
    throw InputError("input too long for depth computation");
  }
  detail::SuffixAutomaton automaton(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) automaton.extend(z[i], static_cast<int>(i));
  return automaton.deepest_repeat(z);
}

}  // namespace switchcode
