#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "switchcode/markov.hpp"
#include "switchcode/sources.hpp"

using namespace switchcode;

namespace {

ModelConfig binary(int depth) {
  ModelConfig config;
  config.alphabet = 2;
  config.depth = depth;
  return config;
}

}  // namespace

TEST(Conditional, UniformAtOrderMinusOne) {
  const CountStore store(256, 3);
  const ModelConfig config;
  const ConditionalLadder ladder = conditional_for_window(store, {}, 65, config);
  EXPECT_DOUBLE_EQ(ladder[-1], 1.0 / 256);
  EXPECT_EQ(ladder.max_order(), 0);
}

TEST(Conditional, AfterSingleZero) {
  CountStore store(2, 2);
  store.append(0);
  const std::vector<Symbol> window{0};
  const ConditionalLadder ladder = conditional_for_window(store, window, 0, binary(2));
  EXPECT_DOUBLE_EQ(ladder[0], 0.75);
  // order-1 context "0" has never been followed by anything
  EXPECT_DOUBLE_EQ(ladder[1], 0.75);
}

TEST(Conditional, FirstSymbolOrderZero) {
  const CountStore store(2, 2);
  const ConditionalLadder ladder = conditional_for_window(store, {}, 1, binary(2));
  EXPECT_DOUBLE_EQ(ladder[0], 0.5);
}

TEST(Conditional, RejectsBadAlphabet) {
  const CountStore store(2, 1);
  ModelConfig config = binary(1);
  config.alphabet = 1;
  EXPECT_THROW(conditional_for_window(store, {}, 0, config), ConfigError);
  EXPECT_THROW(conditional_for_window(store, {}, 2, binary(1)), InputError);
}

TEST(Conditional, NormalizedAndPositiveAlongRandomStreams) {
  std::mt19937_64 rng(11);
  for (int alphabet : {2, 3, 5, 8}) {
    for (Smoothing smoothing : {Smoothing::lower_order, Smoothing::additive}) {
      ModelConfig config;
      config.alphabet = alphabet;
      config.depth = 4;
      config.smoothing = smoothing;
      const auto text = oracle::random_text(rng, alphabet, 400);
      CountStore store(alphabet, config.depth);
      for (std::size_t n = 0; n <= text.size(); ++n) {
        const auto window = std::span(text).first(n);
        std::vector<double> sums(static_cast<std::size_t>(config.depth) + 2, 0.0);
        int orders = 0;
        for (int a = 0; a < alphabet; ++a) {
          const ConditionalLadder ladder = conditional_for_window(store, window, static_cast<Symbol>(a), config);
          orders = ladder.max_order();
          for (int k = -1; k <= orders; ++k) {
            EXPECT_GT(ladder[k], 0.0);
            sums[static_cast<std::size_t>(k + 1)] += ladder[k];
          }
        }
        for (int k = -1; k <= orders; ++k) EXPECT_NEAR(sums[static_cast<std::size_t>(k + 1)], 1.0, 1e-12);
        if (n < text.size()) store.append(text[n]);
      }
    }
  }
}

TEST(Conditional, NormalizedForByteAlphabet) {
  std::mt19937_64 rng(12);
  const ModelConfig config;
  const auto text = oracle::random_text(rng, 4, 2000);  // few distinct bytes, many unseen
  CountStore store(256, config.depth);
  for (Symbol a : text) store.append(a);
  for (std::size_t end : {0u, 1u, 17u, 1999u, 2000u}) {
    const auto window = std::span(text).first(end);
    std::vector<double> sums(static_cast<std::size_t>(config.depth) + 2, 0.0);
    int orders = 0;
    for (int a = 0; a < 256; ++a) {
      const ConditionalLadder ladder = conditional_for_window(store, window, static_cast<Symbol>(a), config);
      orders = ladder.max_order();
      for (int k = -1; k <= orders; ++k) sums[static_cast<std::size_t>(k + 1)] += ladder[k];
    }
    for (int k = -1; k <= orders; ++k) EXPECT_NEAR(sums[static_cast<std::size_t>(k + 1)], 1.0, 1e-12);
  }
}

TEST(Conditional, MatchesOracleLadder) {
  std::mt19937_64 rng(5);
  const oracle::Setup setup{3, 1.001, Mode::plain, {}};
  const auto text = oracle::random_text(rng, 3, 120);
  CountStore store(3, 5);
  ModelConfig config;
  config.alphabet = 3;
  config.depth = 5;
  for (std::size_t n = 0; n < text.size(); ++n) {
    const ConditionalLadder ladder = conditional_for_window(store, std::span(text).first(n), text[n], config);
    for (int k = -1; k <= ladder.max_order(); ++k) {
      EXPECT_NEAR(ladder[k], static_cast<double>(oracle::conditional(setup, text, n, text[n], k)), 1e-14);
    }
    store.append(text[n]);
  }
}

TEST(Conditional, ConvergesToChainTransitions) {
  // order-1 chain on {0,1}; the order-1 estimate tends to the row probabilities
  const SourceSpec spec = SourceSpec::markov(2, 1, {0.9, 0.1, 0.3, 0.7}, 42);
  const auto text = generate(spec, 1'000'000);
  CountStore store(2, 1);
  for (Symbol a : text) store.append(a);
  const ModelConfig config = binary(1);
  for (Symbol ctx : {Symbol{0}, Symbol{1}}) {
    const std::vector<Symbol> window{ctx};
    for (Symbol next : {Symbol{0}, Symbol{1}}) {
      const double expected = spec.row(ctx)[next];
      EXPECT_NEAR(conditional_for_window(store, window, next, config)[1], expected, 0.02);
    }
  }
}
