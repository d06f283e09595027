#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace switchcode {

using Symbol = std::uint8_t;

inline constexpr int kMaxAlphabet = 256;

// Configuration values that make a model ill-defined (alphabet, alpha, depth).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Data that does not fit the configured model, e.g. a symbol >= D.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation not allowed in the object's current state.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Mode { plain, fixed, preadapted };

// lower_order: add B(.|k-1) to the numerator and 1 to the denominator.
// additive: add w to the numerator and w*D to the denominator
// (w = 1 is Laplace, w = 1/2 is Krichevsky-Trofimov). Kept for comparisons.
enum class Smoothing { lower_order, additive };

struct ModelConfig {
  int alphabet = 256;
  double alpha = 1.001;
  int depth = 7;
  Mode mode = Mode::plain;
  Smoothing smoothing = Smoothing::lower_order;
  double additive_weight = 0.5;

  void validate() const {
    if (alphabet < 2 || alphabet > kMaxAlphabet) {
      throw ConfigError("alphabet size must be in [2, 256], got " + std::to_string(alphabet));
    }
    if (!(alpha > 1.0)) {
      throw ConfigError("alpha must be > 1, got " + std::to_string(alpha));
    }
    if (depth < 0) {
      throw ConfigError("depth must be >= 0, got " + std::to_string(depth));
    }
    if (smoothing == Smoothing::additive && !(additive_weight > 0.0 && additive_weight <= 1.0)) {
      throw ConfigError("additive smoothing weight must be in (0, 1]");
    }
  }
};

inline std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::plain: return "plain";
    case Mode::fixed: return "fixed";
    case Mode::preadapted: return "preadapted";
  }
  return "unknown";
}

inline Mode parse_mode(std::string_view name) {
  if (name == "plain") return Mode::plain;
  if (name == "fixed") return Mode::fixed;
  if (name == "preadapted") return Mode::preadapted;
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

}  // namespace switchcode
