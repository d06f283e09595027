#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "switchcode/sources.hpp"

using namespace switchcode;

TEST(Sources, UniformBinaryFrequency) {
  const auto z = generate(SourceSpec::uniform(2, 123), 100'000);
  ASSERT_EQ(z.size(), 100'000u);
  double ones = 0;
  for (Symbol a : z) ones += a;
  EXPECT_NEAR(ones / static_cast<double>(z.size()), 0.5, 0.01);
}

TEST(Sources, DeterministicAlternation) {
  const SourceSpec spec = SourceSpec::markov(2, 1, {0.0, 1.0, 1.0, 0.0}, 9);
  const auto z = generate(spec, 1000);
  for (std::size_t i = 1; i < z.size(); ++i) EXPECT_NE(z[i], z[i - 1]);
  EXPECT_NEAR(spec.entropy_rate(), 0.0, 1e-15);
}

TEST(Sources, UniformEntropy) {
  EXPECT_DOUBLE_EQ(SourceSpec::uniform(4, 1).entropy_rate(), 2.0);
  EXPECT_NEAR(SourceSpec::iid({0.25, 0.75}, 1).entropy_rate(), binary_entropy(0.25), 1e-15);
}

TEST(Sources, MarkovEntropyUsesStationaryWeights) {
  // row 0: stay with 0.9; row 1: stay with 0.6; pi = (0.8, 0.2)
  const SourceSpec spec = SourceSpec::markov(2, 1, {0.9, 0.1, 0.4, 0.6}, 1);
  const auto pi = spec.stationary();
  EXPECT_NEAR(pi[0], 0.8, 1e-12);
  EXPECT_NEAR(pi[1], 0.2, 1e-12);
  EXPECT_NEAR(spec.entropy_rate(), 0.8 * binary_entropy(0.1) + 0.2 * binary_entropy(0.4), 1e-12);
}

TEST(Sources, SecondOrderStationary) {
  // order 2 on {0,1}: next symbol repeats the one two steps back with 0.7
  std::vector<double> table;
  for (int ctx = 0; ctx < 4; ++ctx) {
    const int older = ctx >> 1;
    table.push_back(older == 0 ? 0.7 : 0.3);
    table.push_back(older == 0 ? 0.3 : 0.7);
  }
  const SourceSpec spec = SourceSpec::markov(2, 2, table, 3);
  for (double p : spec.stationary()) EXPECT_NEAR(p, 0.25, 1e-12);
  EXPECT_NEAR(spec.entropy_rate(), binary_entropy(0.3), 1e-12);
}

TEST(Sources, SeedReproducibility) {
  const SourceSpec a = SourceSpec::markov(3, 1, {0.2, 0.3, 0.5, 0.6, 0.2, 0.2, 0.1, 0.1, 0.8}, 77);
  EXPECT_EQ(generate(a, 5000), generate(a, 5000));
  SourceSpec b = a;
  b.seed = 78;
  EXPECT_NE(generate(a, 5000), generate(b, 5000));
  // the stream is a pure function of the seed: a shorter request is a prefix
  const auto longer = generate(a, 6000);
  const auto shorter = generate(a, 5000);
  EXPECT_TRUE(std::equal(shorter.begin(), shorter.end(), longer.begin()));
}

TEST(Sources, ChiSquareIid) {
  const std::vector<double> probs{0.1, 0.2, 0.3, 0.4};
  const std::size_t n = 200'000;
  const auto z = generate(SourceSpec::iid(probs, 2024), n);
  std::array<double, 4> counts{};
  for (Symbol a : z) counts[a] += 1;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double expected = probs[i] * static_cast<double>(n);
    chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
  }
  EXPECT_LT(chi2, 16.27);  // 3 degrees of freedom, p = 0.001
}

TEST(Sources, ChiSquareTransitions) {
  const SourceSpec spec = SourceSpec::markov(2, 1, {0.9, 0.1, 0.3, 0.7}, 5);
  const auto z = generate(spec, 200'000);
  std::array<std::array<double, 2>, 2> counts{};
  for (std::size_t i = 1; i < z.size(); ++i) counts[z[i - 1]][z[i]] += 1;
  double chi2 = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    const double total = counts[c][0] + counts[c][1];
    for (std::size_t a = 0; a < 2; ++a) {
      const double expected = spec.row(c)[a] * total;
      chi2 += (counts[c][a] - expected) * (counts[c][a] - expected) / expected;
    }
  }
  EXPECT_LT(chi2, 13.82);  // 2 degrees of freedom, p = 0.001
}

TEST(Sources, RejectsInvalidTables) {
  EXPECT_THROW(SourceSpec::markov(2, 1, {0.5, 0.6, 0.5, 0.5}, 1), ConfigError);
  EXPECT_THROW(SourceSpec::markov(2, 1, {0.5, 0.5}, 1), ConfigError);
  EXPECT_THROW(SourceSpec::iid({1.2, -0.2}, 1), ConfigError);
  EXPECT_THROW(SourceSpec::iid({1.0}, 1), ConfigError);
  EXPECT_THROW(SourceSpec::markov(2, 0, {0.5, 0.5}, 1), ConfigError);
}
