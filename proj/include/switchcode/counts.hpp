#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "switchcode/config.hpp"

namespace switchcode {

// Number of (possibly overlapping) occurrences of w in z. The empty string
// occurs |z|+1 times. Quadratic; reference for tests only.
inline std::uint64_t count(std::span<const Symbol> w, std::span<const Symbol> z) {
  if (w.size() > z.size()) return 0;
  if (w.empty()) return z.size() + 1;
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i + w.size() <= z.size(); ++i) {
    if (std::equal(w.begin(), w.end(), z.begin() + static_cast<std::ptrdiff_t>(i))) ++hits;
  }
  return hits;
}

// Substring statistics for the adaptive Markov conditionals.
//
// Every gram of length 1..s+1 seen in the counted string is a node of a
// forward trie (node w·a is the child of node w). Each node carries
//   occ(w) = occurrences of w in the counted string z,
//   ext(w) = occurrences of w in z minus its last symbol (|w| <= s),
// so that sum_a occ(w·a) == ext(w). The root stands for the empty string,
// with ext = |z| (the empty string occurs |z| times in a string of length |z|-1).
//
// Child lookup is an open-addressing table of node ids; the (parent, symbol)
// key of a node lives in key_, so copying a store is a handful of memcpys.
class CountStore {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kRoot = 0;
  static constexpr NodeId kAbsent = std::numeric_limits<NodeId>::max();

  CountStore() : CountStore(256, 7, Mode::plain) {}

  CountStore(int alphabet, int depth, Mode mode = Mode::plain)
      : alphabet_(alphabet), depth_(depth), mode_(mode) {
    if (alphabet < 2 || alphabet > kMaxAlphabet) throw ConfigError("alphabet size must be in [2, 256]");
    if (depth < 0) throw ConfigError("depth must be >= 0");
    key_.push_back(0);
    occ_.push_back(0);
    ext_.push_back(0);
    slots_.assign(64, kEmpty);
    context_.push_back(kRoot);
    scratch_.assign(static_cast<std::size_t>(depth) + 2, kRoot);
  }

  int alphabet() const { return alphabet_; }
  int depth() const { return depth_; }
  Mode mode() const { return mode_; }
  bool frozen() const { return frozen_; }
  std::uint64_t appended() const { return appended_; }
  std::size_t node_count() const { return key_.size(); }

  // Counts every gram of length <= s+1 that ends with `a`.
  void append(Symbol a) {
    if (frozen_) throw StateError("count store is frozen: training counts of a fixed model are immutable");
    if (a >= alphabet_) throw InputError("symbol " + std::to_string(a) + " outside alphabet of size " + std::to_string(alphabet_));
    if (appended_ >= std::numeric_limits<std::uint32_t>::max() - 1) throw StateError("count store capacity exceeded");

    const std::size_t levels = context_.size();  // contexts of length 0..min(s, appended)
    std::size_t next_len = 1;
    for (std::size_t l = 0; l < levels; ++l) {
      const NodeId ctx = context_[l];
      if (ctx != kRoot) ++ext_[ctx];  // root ext is appended_
      const NodeId gram = find_or_insert(ctx, a);
      ++occ_[gram];
      if (l + 1 <= static_cast<std::size_t>(depth_)) {
        scratch_[l + 1] = gram;
        next_len = l + 2;
      }
    }
    scratch_[0] = kRoot;
    context_.assign(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(next_len));
    ++appended_;
  }

  void freeze() { frozen_ = true; }

  NodeId child(NodeId parent, Symbol a) const {
    if (parent == kAbsent) return kAbsent;
    const std::uint64_t key = make_key(parent, a);
    for (std::size_t i = slot_of(key);; i = (i + 1) & (slots_.size() - 1)) {
      const NodeId id = slots_[i];
      if (id == kEmpty) return kAbsent;
      if (key_[id] == key) return id;
    }
  }

  std::uint64_t occ(NodeId node) const {
    if (node == kAbsent) return 0;
    if (node == kRoot) return appended_ + 1;
    return occ_[node];
  }

  std::uint64_t ext(NodeId node) const {
    if (node == kAbsent) return 0;
    if (node == kRoot) return appended_;
    return ext_[node];
  }

  NodeId find(std::span<const Symbol> w) const {
    NodeId node = kRoot;
    for (Symbol a : w) {
      node = child(node, a);
      if (node == kAbsent) break;
    }
    return node;
  }

  std::uint64_t occ(std::span<const Symbol> w) const { return occ(find(w)); }
  std::uint64_t ext(std::span<const Symbol> w) const { return ext(find(w)); }

  // context()[l] is the node of the last l appended symbols, l = 0..min(s, appended).
  std::span<const NodeId> context() const { return context_; }

  // Depth of a node (length of the gram it represents).
  std::size_t gram_length(NodeId node) const {
    std::size_t len = 0;
    while (node != kRoot) {
      node = parent_of(node);
      ++len;
    }
    return len;
  }

  // Calls f(gram, occ, ext) for every stored non-empty gram. ext is only
  // maintained for grams of length <= s and reads 0 beyond.
  template <class F>
  void for_each_gram(F&& f) const {
    std::vector<Symbol> gram;
    for (NodeId id = 1; id < key_.size(); ++id) {
      gram.clear();
      for (NodeId n = id; n != kRoot; n = parent_of(n)) gram.push_back(symbol_of(n));
      std::reverse(gram.begin(), gram.end());
      f(std::span<const Symbol>(gram), std::uint64_t{occ_[id]}, std::uint64_t{ext_[id]});
    }
  }

  // Binary snapshot. Format is private to this library and versioned.
  void save(std::ostream& out) const {
    out.write(kMagic, sizeof kMagic);
    put(out, kFormatVersion);
    put(out, static_cast<std::uint32_t>(alphabet_));
    put(out, static_cast<std::uint32_t>(depth_));
    put(out, static_cast<std::uint32_t>(mode_));
    put(out, static_cast<std::uint32_t>(frozen_));
    put(out, appended_);
    put_vector(out, key_);
    put_vector(out, occ_);
    put_vector(out, ext_);
    put_vector(out, context_);
    if (!out) throw std::runtime_error("failed writing count store");
  }

  static CountStore load(std::istream& in) {
    char magic[sizeof kMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw InputError("not a count store file");
    if (get<std::uint32_t>(in) != kFormatVersion) throw InputError("unsupported count store version");
    const auto alphabet = get<std::uint32_t>(in);
    const auto depth = get<std::uint32_t>(in);
    const auto mode = get<std::uint32_t>(in);
    if (alphabet < 2 || alphabet > kMaxAlphabet || depth > kMaxStoredDepth || mode > 2) {
      throw InputError("corrupt count store (header)");
    }
    CountStore store(static_cast<int>(alphabet), static_cast<int>(depth), static_cast<Mode>(mode));
    store.frozen_ = get<std::uint32_t>(in) != 0;
    store.appended_ = get<std::uint64_t>(in);
    store.key_ = get_vector<std::uint64_t>(in);
    store.occ_ = get_vector<std::uint32_t>(in);
    store.ext_ = get_vector<std::uint32_t>(in);
    store.context_ = get_vector<NodeId>(in);
    const std::size_t nodes = store.key_.size();
    if (nodes == 0 || store.occ_.size() != nodes || store.ext_.size() != nodes || store.context_.empty() ||
        store.context_.size() > std::size_t{depth} + 1) {
      throw InputError("corrupt count store (sizes)");
    }
    for (NodeId id = 1; id < nodes; ++id) {
      if (store.parent_of(id) >= id || store.symbol_of(id) >= store.alphabet_) throw InputError("corrupt count store (trie)");
    }
    for (NodeId id : store.context_) {
      if (id >= nodes) throw InputError("corrupt count store (context)");
    }
    store.rebuild_slots(nodes);
    return store;
  }

 private:
  static constexpr NodeId kEmpty = 0;  // the root is never a child
  static constexpr char kMagic[8] = {'S', 'W', 'C', 'S', 'T', 'O', 'R', 'E'};
  static constexpr std::uint32_t kFormatVersion = 1;
  static constexpr std::uint32_t kMaxStoredDepth = 1u << 20;

  static std::uint64_t make_key(NodeId parent, Symbol a) {
    return (static_cast<std::uint64_t>(parent) << 8) | a;
  }
  NodeId parent_of(NodeId node) const { return static_cast<NodeId>(key_[node] >> 8); }
  Symbol symbol_of(NodeId node) const { return static_cast<Symbol>(key_[node] & 0xff); }

  std::size_t slot_of(std::uint64_t key) const {
    // splitmix64 finalizer
    key += 0x9e3779b97f4a7c15ULL;
    key = (key ^ (key >> 30)) * 0xbf58476d1ce4e5b9ULL;
    key = (key ^ (key >> 27)) * 0x94d049bb133111ebULL;
    key ^= key >> 31;
    return static_cast<std::size_t>(key) & (slots_.size() - 1);
  }

  NodeId find_or_insert(NodeId parent, Symbol a) {
    const std::uint64_t key = make_key(parent, a);
    std::size_t i = slot_of(key);
    for (;; i = (i + 1) & (slots_.size() - 1)) {
      const NodeId id = slots_[i];
      if (id == kEmpty) break;
      if (key_[id] == key) return id;
    }
    const auto id = static_cast<NodeId>(key_.size());
    key_.push_back(key);
    occ_.push_back(0);
    ext_.push_back(0);
    slots_[i] = id;
    if (key_.size() * 10 > slots_.size() * 7) rebuild_slots(key_.size());
    return id;
  }

  void rebuild_slots(std::size_t nodes) {
    std::size_t capacity = 64;
    while (nodes * 10 > capacity * 5) capacity *= 2;
    slots_.assign(capacity, kEmpty);
    for (NodeId id = 1; id < nodes; ++id) {
      std::size_t i = slot_of(key_[id]);
      while (slots_[i] != kEmpty) i = (i + 1) & (capacity - 1);
      slots_[i] = id;
    }
  }

  template <class T>
  static void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
  }
  template <class T>
  static void put_vector(std::ostream& out, const std::vector<T>& v) {
    put(out, static_cast<std::uint64_t>(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
  }
  template <class T>
  static T get(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof value);
    if (!in) throw InputError("truncated count store");
    return value;
  }
  template <class T>
  static std::vector<T> get_vector(std::istream& in) {
    const auto size = get<std::uint64_t>(in);
    if (size > std::numeric_limits<NodeId>::max()) throw InputError("corrupt count store (length)");
    std::vector<T> v(size);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(size * sizeof(T)));
    if (!in) throw InputError("truncated count store");
    return v;
  }

  int alphabet_;
  int depth_;
  Mode mode_;
  bool frozen_ = false;
  std::uint64_t appended_ = 0;
  std::vector<std::uint64_t> key_;  // parent << 8 | symbol
  std::vector<std::uint32_t> occ_;
  std::vector<std::uint32_t> ext_;
  std::vector<NodeId> slots_;
  std::vector<NodeId> context_;
  std::vector<NodeId> scratch_;
};

// Counts of the training corpus y. A fixed store is frozen afterwards; a
// preadapted store keeps its context window so grams spanning y·x are counted.
inline CountStore train(std::span<const Symbol> corpus, const ModelConfig& config) {
  config.validate();
  if (corpus.empty()) throw InputError("training corpus is empty");
  if (config.mode == Mode::plain) throw ConfigError("plain models are not trained");
  CountStore store(config.alphabet, config.depth, config.mode);
  for (Symbol a : corpus) store.append(a);
  if (config.mode == Mode::fixed) store.freeze();
  return store;
}

}  // namespace switchcode
