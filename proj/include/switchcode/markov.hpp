#pragma once

#include <span>
#include <vector>

#include "switchcode/config.hpp"
#include "switchcode/counts.hpp"

namespace switchcode {

// B(next | context, k) for k = -1..K, where K = |context nodes| - 1.
class ConditionalLadder {
 public:
  ConditionalLadder() = default;
  explicit ConditionalLadder(std::vector<double> values) : values_(std::move(values)) {}

  double operator[](int k) const { return values_.at(static_cast<std::size_t>(k + 1)); }
  int max_order() const { return static_cast<int>(values_.size()) - 2; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;  // values_[k + 1]
};

namespace detail {

// Hot-path ladder. `context[l]` is the store node of the length-l suffix of
// the coded prefix (kAbsent when that context was never counted). Writes
// B(next|.,k) to out[k + 1] and the node of context_k·next to grams[k].
inline void fill_ladder(const CountStore& store, std::span<const CountStore::NodeId> context, Symbol next,
                        const ModelConfig& config, std::span<double> out,
                        std::span<CountStore::NodeId> grams) {
  const double uniform = 1.0 / config.alphabet;
  out[0] = uniform;
  const bool additive = config.smoothing == Smoothing::additive;
  const double w = config.additive_weight;
  for (std::size_t k = 0; k < context.size(); ++k) {
    const CountStore::NodeId ctx = context[k];
    const CountStore::NodeId gram = store.child(ctx, next);
    grams[k] = gram;
    const auto num = static_cast<double>(store.occ(gram));
    const auto den = static_cast<double>(store.ext(ctx));
    if (additive) {
      out[k + 1] = (num + w) / (den + w * config.alphabet);
    } else {
      out[k + 1] = (num + out[k]) / (den + 1.0);
    }
  }
}

}  // namespace detail

inline ConditionalLadder conditional(const CountStore& store, std::span<const CountStore::NodeId> context,
                                     Symbol next, const ModelConfig& config) {
  config.validate();
  if (next >= config.alphabet) throw InputError("symbol outside alphabet");
  std::vector<double> values(context.size() + 1);
  std::vector<CountStore::NodeId> grams(context.size());
  detail::fill_ladder(store, context, next, config, values, grams);
  return ConditionalLadder(std::move(values));
}

// Ladder for an explicit window of preceding symbols; orders 0..min(|window|, s).
inline ConditionalLadder conditional_for_window(const CountStore& store, std::span<const Symbol> window,
                                                Symbol next, const ModelConfig& config) {
  const std::size_t orders = std::min<std::size_t>(window.size(), static_cast<std::size_t>(store.depth()));
  std::vector<CountStore::NodeId> context(orders + 1);
  for (std::size_t k = 0; k <= orders; ++k) context[k] = store.find(window.last(k));
  return conditional(store, context, next, config);
}

}  // namespace switchcode
