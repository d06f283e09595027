#pragma once

// Brute-force references used by the tests. Nothing here touches
// CountStore or SwitchState: conditionals are evaluated from the naive
// substring counter on explicit strings and the switch recursion runs over
// every order without a depth cap, in linear long double arithmetic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "switchcode/config.hpp"
#include "switchcode/counts.hpp"

namespace oracle {

using switchcode::Mode;
using switchcode::Symbol;
using Text = std::vector<Symbol>;

struct Setup {
  int alphabet = 2;
  double alpha = 1.001;
  Mode mode = Mode::plain;
  Text training;  // fixed and preadapted
};

inline long double stay(std::uint64_t n, double alpha) {
  return std::exp(-std::pow(static_cast<long double>(n) + 1.0L, -static_cast<long double>(alpha)));
}

// z without its last symbol; false for the empty string, whose "prefix" has length -1.
inline bool drop_last(const Text& z, Text& out) {
  if (z.empty()) return false;
  out.assign(z.begin(), z.end() - 1);
  return true;
}

// B(x_{n+1} = next | x_1^n, k) for k = -1..n straight from the defining
// formula; entry k + 1 holds order k.
inline std::vector<long double> ladder(const Setup& setup, std::span<const Symbol> x, std::size_t n, Symbol next) {
  Text counted;  // string whose counts feed the estimator
  switch (setup.mode) {
    case Mode::plain: counted.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n)); break;
    case Mode::fixed: counted = setup.training; break;
    case Mode::preadapted:
      counted = setup.training;
      counted.insert(counted.end(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
      break;
  }
  Text shorter;
  const bool has_shorter = drop_last(counted, shorter);
  std::vector<long double> out(n + 2);
  out[0] = 1.0L / setup.alphabet;
  for (std::size_t k = 0; k <= n; ++k) {
    const Text ctx(x.begin() + static_cast<std::ptrdiff_t>(n - k), x.begin() + static_cast<std::ptrdiff_t>(n));
    Text gram = ctx;
    gram.push_back(next);
    const auto num = static_cast<long double>(switchcode::count(gram, counted));
    const long double den = has_shorter ? static_cast<long double>(switchcode::count(ctx, shorter)) : 0.0L;
    out[k + 1] = (num + out[k]) / (den + 1.0L);
  }
  return out;
}

inline long double conditional(const Setup& setup, std::span<const Symbol> x, std::size_t n, Symbol next, int k) {
  return ladder(setup, x, n, next).at(static_cast<std::size_t>(k + 1));
}

// P(x_1^N) with every order -1..N-1 tracked separately.
inline long double probability(const Setup& setup, std::span<const Symbol> x) {
  const std::size_t total = x.size();
  if (total == 0) return 1.0L;
  // mass[k + 1] = P(x_1^n, k); before any symbol all mass sits at k = -1
  std::vector<long double> mass(total + 2, 0.0L), next(total + 2, 0.0L);
  mass[0] = 1.0L;
  for (std::size_t n = 0; n < total; ++n) {
    const long double p = stay(n, setup.alpha);
    const long double q = 1.0L - p;
    const std::vector<long double> b = ladder(setup, x, n, x[n]);
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::size_t i = 0; i <= n + 1; ++i) {  // k = -1..n
      const long double from_lower = i == 0 ? 0.0L : mass[i - 1];
      next[i] = (p * mass[i] + q * from_lower) * b[i];
    }
    std::swap(mass, next);
  }
  long double sum = 0.0L;
  for (long double m : mass) sum += m;
  return sum;
}

// B(x_{k+1}^N | x_1^k, k): the adaptive order-k model alone.
inline long double order_k_probability(const Setup& setup, std::span<const Symbol> x, int k) {
  long double prod = 1.0L;
  for (std::size_t n = static_cast<std::size_t>(k); n < x.size(); ++n) prod *= conditional(setup, x, n, x[n], k);
  return prod;
}

inline Text random_text(std::mt19937_64& rng, int alphabet, std::size_t length) {
  Text t(length);
  for (Symbol& s : t) s = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(alphabet));
  return t;
}

// Every string of the given length over {0..alphabet-1}, in lexicographic order.
template <class F>
void for_each_string(int alphabet, std::size_t length, F&& f) {
  Text t(length, 0);
  while (true) {
    f(std::span<const Symbol>(t));
    std::size_t i = length;
    while (i > 0) {
      --i;
      if (++t[i] < alphabet) break;
      t[i] = 0;
      if (i == 0) return;
    }
    if (length == 0) return;
  }
}

// Quadratic depth: longest w with count(w, z) >= 2.
inline std::size_t brute_depth(std::span<const Symbol> z) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      std::size_t l = 0;
      while (j + l < z.size() && z[i + l] == z[j + l]) ++l;
      best = std::max(best, l);
    }
  }
  return best;
}

}  // namespace oracle
