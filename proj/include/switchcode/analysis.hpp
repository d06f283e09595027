#pragma once

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "switchcode/config.hpp"
#include "switchcode/counts.hpp"
#include "switchcode/lz.hpp"
#include "switchcode/repeats.hpp"
#include "switchcode/switch.hpp"

namespace switchcode {

// A code whose length we measure: one of the switch distributions or LZ78.
struct CodeModel {
  std::string name;
  bool lz = false;
  ModelConfig config;
  std::shared_ptr<const CountStore> training;  // fixed and preadapted only

  static CodeModel switch_model(const ModelConfig& config, std::shared_ptr<const CountStore> training = nullptr) {
    CodeModel model;
    model.name = std::string(to_string(config.mode));
    model.config = config;
    model.training = std::move(training);
    return model;
  }

  static CodeModel lz_model(int alphabet) {
    CodeModel model;
    model.name = "lz";
    model.lz = true;
    model.config.alphabet = alphabet;
    return model;
  }
};

// -log2 P(x_1^n) at each checkpoint n (ascending, each <= |data|), from a
// single sequential pass.
inline std::vector<double> prefix_code_lengths(const CodeModel& model, std::span<const Symbol> data,
                                               std::span<const std::uint64_t> checkpoints) {
  std::vector<double> bits;
  bits.reserve(checkpoints.size());
  if (checkpoints.empty()) return bits;
  const std::uint64_t end = checkpoints.back();
  if (end > data.size()) throw InputError("checkpoint beyond end of data");
  std::size_t next = 0;
  const auto record = [&](std::uint64_t n, auto&& length) {
    while (next < checkpoints.size() && checkpoints[next] == n) {
      bits.push_back(length());
      ++next;
    }
  };
  if (checkpoints.front() == 0) throw InputError("checkpoints start at n = 1");
  if (model.lz) {
    LzCoder coder(model.config.alphabet);
    for (std::uint64_t i = 0; i < end; ++i) {
      coder.push(data[i]);
      record(i + 1, [&] { return coder.code_length_bits(); });
    }
  } else {
    SwitchState state(model.config, model.training);
    for (std::uint64_t i = 0; i < end; ++i) {
      state.step(data[i]);
      record(i + 1, [&] { return state.code_length_bits(); });
    }
  }
  if (bits.size() != checkpoints.size()) throw InputError("checkpoints must be ascending");
  return bits;
}

inline double code_length(const CodeModel& model, std::span<const Symbol> data) {
  const std::uint64_t n = data.size();
  return prefix_code_lengths(model, data, std::span(&n, 1)).front();
}

// 2, 4, ..., largest power of two <= max_n
inline std::vector<std::uint64_t> doubling_lengths(std::uint64_t max_n, std::uint64_t first = 2) {
  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = first; n <= max_n; n *= 2) ns.push_back(n);
  return ns;
}

struct SeriesPoint {
  std::uint64_t n = 0;
  double bits = 0.0;

  double rate() const { return bits / static_cast<double>(n); }
};

struct CodeLengthSeries {
  std::string model;
  std::string source;
  std::vector<SeriesPoint> points;
};

struct MiPoint {
  std::uint64_t n = 0;
  double mi_bits = 0.0;
};

struct MiSeries {
  std::string model;
  std::string source;
  std::vector<MiPoint> points;
};

inline void check_series_request(std::span<const Symbol> corpus, std::uint64_t max_n) {
  if (corpus.size() < 2) throw InputError("corpus shorter than 2 symbols");
  if (max_n < 2) throw InputError("series starts at n = 2; max_n must be >= 2");
  if (max_n > corpus.size()) throw InputError("max_n exceeds corpus length");
}

inline CodeLengthSeries code_length_series(const CodeModel& model, std::span<const Symbol> corpus, std::uint64_t max_n,
                                           std::string source = {}) {
  check_series_request(corpus, max_n);
  const std::vector<std::uint64_t> ns = doubling_lengths(max_n);
  const std::vector<double> bits = prefix_code_lengths(model, corpus, ns);
  CodeLengthSeries series{model.name, std::move(source), {}};
  for (std::size_t i = 0; i < ns.size(); ++i) series.points.push_back({ns[i], bits[i]});
  return series;
}

// I(n) = H(x_1^{n/2}) + H(x_{n/2+1}^n) - H(x_1^n). The second half is coded
// by a fresh model (training counts only), i.e. as the marginal P(Y).
inline MiSeries mi_series(const CodeModel& model, std::span<const Symbol> corpus, std::uint64_t max_n,
                          std::string source = {}) {
  check_series_request(corpus, max_n);
  const std::vector<std::uint64_t> ns = doubling_lengths(max_n, 1);
  const std::vector<double> prefix = prefix_code_lengths(model, corpus, ns);
  MiSeries series{model.name, std::move(source), {}};
  for (std::size_t i = 1; i < ns.size(); ++i) {
    const std::uint64_t half = ns[i] / 2;
    const double second = code_length(model, corpus.subspan(half, half));
    series.points.push_back({ns[i], prefix[i - 1] + second - prefix[i]});
  }
  return series;
}

// Depth that makes the capped recursion exact: L of the coded text, or of
// training·text when training counts are used.
inline int exact_depth(std::span<const Symbol> input, std::span<const Symbol> training = {}) {
  if (training.empty()) return static_cast<int>(max_repeat_length(input).depth);
  std::vector<Symbol> joined(training.begin(), training.end());
  joined.insert(joined.end(), input.begin(), input.end());
  return static_cast<int>(max_repeat_length(joined).depth);
}

// ---------------------------------------------------------------------------
// Power-law fits y = c n^gamma

enum class FitMethod {
  nonlinear,  // least squares on y itself (the default)
  loglog,     // ordinary least squares of log2 y on log2 n
};

struct FitRange {
  std::uint64_t min_n = 8;
  std::uint64_t max_n = std::numeric_limits<std::uint64_t>::max();
};

struct PowerLawFit {
  double c = 0.0;
  double gamma = 0.0;
  double residual = 0.0;  // RMS of log2 y - log2(c n^gamma) over fitted points
  std::uint64_t n_min = 0;
  std::uint64_t n_max = 0;
  std::size_t points = 0;
};

struct PowerLawPoint {
  double n = 0.0;
  double y = 0.0;
};

namespace detail {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

inline LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  const auto m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InputError("power-law fit needs at least two distinct n");
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

}  // namespace detail

inline PowerLawFit fit_power_law(std::span<const PowerLawPoint> points, FitRange range = {},
                                 FitMethod method = FitMethod::nonlinear) {
  std::vector<double> log_n, log_y, n, y;
  PowerLawFit fit;
  for (const PowerLawPoint& p : points) {
    if (!(p.y > 0.0) || !(p.n > 0.0) || p.n < static_cast<double>(range.min_n) ||
        p.n > static_cast<double>(range.max_n)) {
      continue;
    }
    n.push_back(p.n);
    y.push_back(p.y);
    log_n.push_back(std::log2(p.n));
    log_y.push_back(std::log2(p.y));
    fit.n_min = fit.points == 0 ? static_cast<std::uint64_t>(p.n) : std::min(fit.n_min, static_cast<std::uint64_t>(p.n));
    fit.n_max = std::max(fit.n_max, static_cast<std::uint64_t>(p.n));
    ++fit.points;
  }
  if (fit.points < 3) throw InputError("power-law fit needs at least 3 points with positive ordinate in range");

  const detail::LineFit line = detail::least_squares_line(log_n, log_y);
  fit.gamma = line.slope;
  fit.c = std::exp2(line.intercept);

  if (method == FitMethod::nonlinear) {
    // For fixed gamma the best c is closed-form; minimise the profile over gamma.
    // n is scaled by its maximum to keep powers in range.
    const double scale = static_cast<double>(fit.n_max);
    const auto best_c = [&](double g) {
      double num = 0, den = 0;
      for (std::size_t i = 0; i < n.size(); ++i) {
        const double t = std::pow(n[i] / scale, g);
        num += y[i] * t;
        den += t * t;
      }
      return num / den;
    };
    const auto sse = [&](double g) {
      const double c = best_c(g);
      double total = 0;
      for (std::size_t i = 0; i < n.size(); ++i) {
        const double r = y[i] - c * std::pow(n[i] / scale, g);
        total += r * r;
      }
      return total;
    };
    const auto [g, value] = boost::math::tools::brent_find_minima(sse, line.slope - 4.0, line.slope + 4.0, 52);
    (void)value;
    fit.gamma = g;
    fit.c = best_c(g) * std::pow(scale, -g);
  }

  double ss = 0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    const double r = log_y[i] - (std::log2(fit.c) + fit.gamma * log_n[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(log_n.size()));
  return fit;
}

inline std::vector<PowerLawPoint> to_points(const MiSeries& series) {
  std::vector<PowerLawPoint> out;
  for (const MiPoint& p : series.points) out.push_back({static_cast<double>(p.n), p.mi_bits});
  return out;
}

inline std::vector<PowerLawPoint> rate_points(const CodeLengthSeries& series) {
  std::vector<PowerLawPoint> out;
  for (const SeriesPoint& p : series.points) out.push_back({static_cast<double>(p.n), p.rate()});
  return out;
}

// ---------------------------------------------------------------------------
// CSV and plot data

namespace detail {

inline std::string format_fixed(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

}  // namespace detail

inline void write_rate_csv(std::ostream& out, std::span<const CodeLengthSeries> series) {
  out << "n,model,bits,rate_bpc\n";
  for (const CodeLengthSeries& s : series) {
    for (const SeriesPoint& p : s.points) {
      out << p.n << ',' << s.model << ',' << detail::format_fixed(p.bits) << ',' << detail::format_fixed(p.rate())
          << '\n';
    }
  }
}

inline void write_mi_csv(std::ostream& out, std::span<const MiSeries> series) {
  out << "n,model,mi_bits\n";
  for (const MiSeries& s : series) {
    for (const MiPoint& p : s.points) out << p.n << ',' << s.model << ',' << detail::format_fixed(p.mi_bits) << '\n';
  }
}

struct NamedFit {
  std::string model;
  PowerLawFit fit;
};

inline void write_fit_csv(std::ostream& out, std::span<const NamedFit> fits) {
  out << "model,c,gamma,residual,n_min,n_max\n";
  for (const NamedFit& f : fits) {
    out << f.model << ',' << detail::format_fixed(f.fit.c) << ',' << detail::format_fixed(f.fit.gamma) << ','
        << detail::format_fixed(f.fit.residual) << ',' << f.fit.n_min << ',' << f.fit.n_max << '\n';
  }
}

// Whitespace-separated columns for log-log plotting: model n y log2n log2y.
// Non-positive y are kept with empty log columns marked "nan".
inline void write_plot_data(std::ostream& out, std::string_view model, std::span<const PowerLawPoint> points) {
  out << "# model n y log2_n log2_y\n";
  for (const PowerLawPoint& p : points) {
    out << model << ' ' << static_cast<std::uint64_t>(p.n) << ' ' << detail::format_fixed(p.y) << ' '
        << detail::format_fixed(std::log2(p.n)) << ' ' << (p.y > 0 ? detail::format_fixed(std::log2(p.y)) : "nan")
        << '\n';
  }
}

}  // namespace switchcode
