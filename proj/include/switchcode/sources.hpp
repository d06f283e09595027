#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "switchcode/config.hpp"

namespace switchcode {

enum class SourceKind { iid, markov };

// A stationary source with a known entropy rate.
//
// iid: `probabilities` holds D symbol probabilities.
// markov of order k: D^k rows of D transition probabilities; row index is
// the context read as a base-D number, oldest symbol most significant.
struct SourceSpec {
  SourceKind kind = SourceKind::iid;
  int alphabet = 2;
  int order = 0;
  std::vector<double> probabilities;
  std::uint64_t seed = 0;

  static SourceSpec iid(std::vector<double> probabilities, std::uint64_t seed) {
    SourceSpec spec;
    spec.kind = SourceKind::iid;
    spec.alphabet = static_cast<int>(probabilities.size());
    spec.probabilities = std::move(probabilities);
    spec.seed = seed;
    spec.validate();
    return spec;
  }

  static SourceSpec uniform(int alphabet, std::uint64_t seed) {
    return iid(std::vector<double>(static_cast<std::size_t>(alphabet), 1.0 / alphabet), seed);
  }

  static SourceSpec markov(int alphabet, int order, std::vector<double> table, std::uint64_t seed) {
    SourceSpec spec;
    spec.kind = SourceKind::markov;
    spec.alphabet = alphabet;
    spec.order = order;
    spec.probabilities = std::move(table);
    spec.seed = seed;
    spec.validate();
    return spec;
  }

  std::size_t contexts() const {
    std::size_t rows = 1;
    if (kind == SourceKind::markov) {
      for (int i = 0; i < order; ++i) rows *= static_cast<std::size_t>(alphabet);
    }
    return rows;
  }

  std::span<const double> row(std::size_t context) const {
    return std::span(probabilities).subspan(context * static_cast<std::size_t>(alphabet),
                                            static_cast<std::size_t>(alphabet));
  }

  void validate() const {
    if (alphabet < 2 || alphabet > kMaxAlphabet) throw ConfigError("source alphabet must be in [2, 256]");
    if (kind == SourceKind::markov && (order < 1 || std::pow(alphabet, order) > 1 << 16)) {
      throw ConfigError("markov order must be >= 1 with at most 65536 contexts");
    }
    if (probabilities.size() != contexts() * static_cast<std::size_t>(alphabet)) {
      throw ConfigError("probability table has " + std::to_string(probabilities.size()) + " entries, expected " +
                        std::to_string(contexts() * static_cast<std::size_t>(alphabet)));
    }
    for (std::size_t c = 0; c < contexts(); ++c) {
      double sum = 0.0;
      for (double p : row(c)) {
        if (!(p >= 0.0)) throw ConfigError("negative or NaN probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("probability row " + std::to_string(c) + " does not sum to 1");
    }
  }

  // Stationary distribution over contexts (a single 1.0 for iid).
  std::vector<double> stationary() const {
    const std::size_t n = contexts();
    if (kind == SourceKind::iid) return {1.0};
    const auto d = static_cast<std::size_t>(alphabet);
    // Solve pi (T - I) = 0 with sum(pi) = 1 as a least-squares system.
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n));
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t a = 0; a < d; ++a) {
        const std::size_t next = (c * d + a) % n;
        system(static_cast<Eigen::Index>(next), static_cast<Eigen::Index>(c)) += row(c)[a];
      }
      system(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) -= 1.0;
      system(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) = 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 1));
    rhs(static_cast<Eigen::Index>(n)) = 1.0;
    const Eigen::VectorXd pi = system.colPivHouseholderQr().solve(rhs);
    std::vector<double> out(n);
    for (std::size_t c = 0; c < n; ++c) out[c] = std::max(0.0, pi(static_cast<Eigen::Index>(c)));
    return out;
  }

  // Bits per symbol: H(p) for iid, sum_c pi(c) H(T[c]) for markov.
  double entropy_rate() const {
    const std::vector<double> pi = stationary();
    double h = 0.0;
    for (std::size_t c = 0; c < pi.size(); ++c) {
      for (double p : row(c)) {
        if (p > 0.0) h -= pi[c] * p * std::log2(p);
      }
    }
    return h;
  }
};

namespace detail {

// 53-bit uniform in [0, 1) from mt19937_64; distributions are not used
// because their output is implementation-defined.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::size_t draw(std::span<const double> weights, std::mt19937_64& rng) {
  const double u = unit_uniform(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

}  // namespace detail

inline std::vector<Symbol> generate(const SourceSpec& spec, std::uint64_t length) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::vector<Symbol> out;
  out.reserve(length);
  if (spec.kind == SourceKind::iid) {
    for (std::uint64_t i = 0; i < length; ++i) out.push_back(static_cast<Symbol>(detail::draw(spec.probabilities, rng)));
    return out;
  }
  const std::size_t rows = spec.contexts();
  const auto d = static_cast<std::size_t>(spec.alphabet);
  const std::vector<double> pi = spec.stationary();
  std::size_t context = detail::draw(pi, rng);
  for (std::uint64_t i = 0; i < length; ++i) {
    const std::size_t a = detail::draw(spec.row(context), rng);
    out.push_back(static_cast<Symbol>(a));
    context = (context * d + a) % rows;
  }
  return out;
}

// Binary entropy in bits.
inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

}  // namespace switchcode
