#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "switchcode/config.hpp"
#include "switchcode/counts.hpp"
#include "switchcode/markov.hpp"

namespace switchcode {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow; -inf is the additive identity.
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

inline double log_sum(std::span<const double> xs) {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

// p_n = exp(-(n+1)^-alpha), the probability of staying at the current order.
inline double transition_weight(std::uint64_t n, double alpha) {
  if (!(alpha > 1.0)) throw ConfigError("alpha must be > 1");
  return std::exp(-std::pow(static_cast<double>(n) + 1.0, -alpha));
}

namespace detail {

inline double log_stay(std::uint64_t n, double alpha) { return -std::pow(static_cast<double>(n) + 1.0, -alpha); }

// log(1 - p_n), accurate when p_n is close to 1
inline double log_switch(std::uint64_t n, double alpha) {
  return std::log(-std::expm1(log_stay(n, alpha)));
}

}  // namespace detail

// Sequential consumer of one stream under the depth-capped switch distribution.
//
// Holds log P(x_1^n, k) for k = -1..s and the aggregated mass of all orders
// above s (the bullet bucket). Before the first symbol the whole mass sits at
// order -1, so the first step reproduces P(x_1,-1) = p_0/D and
// P(x_1,0) = q_0 B(x_1|0).
class SwitchState {
 public:
  explicit SwitchState(const ModelConfig& config) : SwitchState(config, nullptr) {}

  SwitchState(const ModelConfig& config, std::shared_ptr<const CountStore> training) : config_(config) {
    config_.validate();
    const auto s = static_cast<std::size_t>(config_.depth);
    switch (config_.mode) {
      case Mode::plain:
        adaptive_ = CountStore(config_.alphabet, config_.depth, Mode::plain);
        break;
      case Mode::fixed:
      case Mode::preadapted:
        if (!training) throw ConfigError(std::string(to_string(config_.mode)) + " model requires a training corpus");
        check_training(*training);
        if (config_.mode == Mode::fixed) {
          frozen_ = std::move(training);
          adaptive_ = CountStore(config_.alphabet, 0, Mode::plain);
        } else {
          adaptive_ = *training;
        }
        break;
    }
    log_mass_.assign(s + 2, kNegInf);
    log_mass_[0] = 0.0;
    next_mass_.assign(s + 2, kNegInf);
    ladder_.assign(s + 2, 0.0);
    grams_.assign(s + 1, CountStore::kAbsent);
    cursor_.assign(1, CountStore::kRoot);
  }

  const ModelConfig& config() const { return config_; }
  const CountStore& store() const { return frozen_ ? *frozen_ : adaptive_; }
  std::uint64_t consumed() const { return consumed_; }

  void step(Symbol next) {
    check_symbol(next);
    next_bullet_ = advance(next, next_mass_);
    std::swap(log_mass_, next_mass_);
    log_bullet_ = next_bullet_;

    const auto s = static_cast<std::size_t>(config_.depth);
    const std::size_t orders = std::min<std::uint64_t>(consumed_ + 1, s) + 1;
    if (frozen_) {
      // context_{k+1} of the extended prefix is context_k·next
      cursor_.resize(orders);
      for (std::size_t l = orders - 1; l >= 1; --l) cursor_[l] = grams_[l - 1];
      cursor_[0] = CountStore::kRoot;
    } else {
      adaptive_.append(next);
      const auto ctx = adaptive_.context();
      cursor_.assign(ctx.begin(), ctx.begin() + static_cast<std::ptrdiff_t>(orders));
    }
    ++consumed_;
  }

  // log P(x_1^n · next) (natural log) without consuming `next`.
  double predict_logprob(Symbol next) const {
    check_symbol(next);
    std::vector<double> masses(log_mass_.size());
    const double bullet = advance(next, masses);
    return total_of(masses, bullet);
  }

  // log P(x_1^n), natural log.
  double total_logprob() const {
    if (consumed_ == 0) throw StateError("no symbols consumed");
    return total_of(log_mass_, log_bullet_);
  }

  // -log2 P(x_1^n)
  double code_length_bits() const { return -total_logprob() / std::numbers::ln2; }

  // log P(x_1^n, k) at index k + 1, k = -1..s.
  std::span<const double> log_masses() const { return log_mass_; }
  double log_bullet() const { return log_bullet_; }

  // Share of P(x_1^n) held by each order -1..s, then the bullet bucket.
  std::vector<double> order_posterior() const {
    const double total = total_logprob();
    std::vector<double> share;
    share.reserve(log_mass_.size() + 1);
    for (double m : log_mass_) share.push_back(std::exp(m - total));
    share.push_back(std::exp(log_bullet_ - total));
    return share;
  }

 private:
  void check_training(const CountStore& training) const {
    if (training.alphabet() != config_.alphabet || training.depth() != config_.depth) {
      throw ConfigError("training counts were built for a different alphabet or depth");
    }
    if (training.mode() != config_.mode) throw ConfigError("training counts were built for a different mode");
    if (training.appended() == 0) throw ConfigError("training corpus is empty");
  }

  void check_symbol(Symbol next) const {
    if (next >= config_.alphabet) {
      throw InputError("symbol " + std::to_string(next) + " outside alphabet of size " + std::to_string(config_.alphabet));
    }
  }

  static double total_of(std::span<const double> masses, double bullet) {
    return log_add(log_sum(masses), bullet);
  }

  // New masses after `next`; returns the new bullet. Fills grams_ as a side
  // effect (children of the cursor nodes), used by step() in fixed mode.
  double advance(Symbol next, std::vector<double>& out) const {
    const auto s = static_cast<std::uint64_t>(config_.depth);
    const std::uint64_t n = consumed_;
    const std::size_t top = static_cast<std::size_t>(std::min(n, s));  // highest order with a context
    const std::span<double> ladder(ladder_.data(), top + 2);
    detail::fill_ladder(store(), std::span(cursor_).first(top + 1), next, config_, ladder,
                        std::span(grams_).first(top + 1));

    const double stay = detail::log_stay(n, config_.alpha);
    const double move = detail::log_switch(n, config_.alpha);
    out[0] = stay + log_mass_[0] + std::log(ladder[0]);
    for (std::size_t i = 1; i <= top + 1; ++i) {
      out[i] = log_add(stay + log_mass_[i], move + log_mass_[i - 1]) + std::log(ladder[i]);
    }
    for (std::size_t i = top + 2; i < out.size(); ++i) out[i] = kNegInf;
    if (n >= s + 1) {
      return log_add(log_bullet_, move + log_mass_[s + 1]) + std::log(ladder[s + 1]);
    }
    return kNegInf;
  }

  ModelConfig config_;
  std::shared_ptr<const CountStore> frozen_;
  CountStore adaptive_;
  std::vector<CountStore::NodeId> cursor_;
  std::uint64_t consumed_ = 0;
  std::vector<double> log_mass_;
  double log_bullet_ = kNegInf;

  // scratch
  std::vector<double> next_mass_;
  double next_bullet_ = kNegInf;
  mutable std::vector<double> ladder_;
  mutable std::vector<CountStore::NodeId> grams_;
};

}  // namespace switchcode
