#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "manifest.hpp"
#include "switchcode/switchcode.hpp"

namespace switchcode::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::vector<std::string> models{"plain"};
  std::string input;
  std::string train;
  std::string out;
  std::string cache;
  double alpha = 1.001;
  std::string depth = "7";
  int alphabet = 0;  // 0: 256, or 27 with --letters
  bool letters = false;
  std::uint64_t max_n = 0;
  std::string fit_range;
  std::string fit_method = "nonlinear";
  std::string smoothing = "lower-order";
};

struct GenOptions {
  std::string source = "iid";
  int alphabet = 2;
  int order = 1;
  std::string probs;
  std::string table;
  std::uint64_t length = 0;
  std::uint64_t seed = 1;
  std::string out;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_numbers(const std::string& text, char sep) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (item.empty()) continue;
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
  }
  return values;
}

FitRange parse_fit_range(const std::string& text) {
  FitRange range;
  if (text.empty()) return range;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--fit-range expects MIN:MAX");
  const auto number = [&](std::string_view part, std::uint64_t fallback) {
    if (part.empty()) return fallback;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size()) throw UsageError("bad --fit-range '" + text + "'");
    return v;
  };
  const std::string_view view(text);
  range.min_n = number(view.substr(0, colon), range.min_n);
  range.max_n = number(view.substr(colon + 1), range.max_n);
  if (range.min_n > range.max_n) throw UsageError("empty --fit-range");
  return range;
}

FitMethod parse_fit_method(const std::string& name) {
  if (name == "nonlinear") return FitMethod::nonlinear;
  if (name == "loglog") return FitMethod::loglog;
  throw UsageError("unknown fit method '" + name + "'");
}

// Input and training data after the optional letter filter.
struct Corpora {
  std::vector<Symbol> input;
  std::vector<Symbol> train;
  int alphabet = 256;
};

Corpora load_corpora(const Options& opt, RunManifest& manifest) {
  Corpora c;
  if (opt.input.empty()) throw UsageError("--input is required");
  std::vector<Symbol> raw = read_corpus(opt.input);
  manifest.add_file("input", opt.input, raw);
  c.input = opt.letters ? to_letter_alphabet(raw) : std::move(raw);
  if (!opt.train.empty()) {
    std::vector<Symbol> raw_train = read_corpus(opt.train);
    manifest.add_file("train", opt.train, raw_train);
    c.train = opt.letters ? to_letter_alphabet(raw_train) : std::move(raw_train);
  }
  c.alphabet = opt.alphabet != 0 ? opt.alphabet : (opt.letters ? kLetterAlphabet : 256);
  if (opt.letters && c.alphabet != kLetterAlphabet) throw UsageError("--letters implies --alphabet 27");
  check_alphabet(c.input, c.alphabet);
  check_alphabet(c.train, c.alphabet);
  return c;
}

std::uint64_t resolve_max_n(const Options& opt, const Corpora& c) {
  if (c.input.size() < 2) throw InputError("input shorter than 2 symbols");
  std::uint64_t max_n = opt.max_n;
  if (max_n == 0) {
    max_n = 1;
    while (max_n * 2 <= c.input.size()) max_n *= 2;
  }
  return max_n;
}

std::shared_ptr<const CountStore> training_store(const Options& opt, const ModelConfig& config, const Corpora& c,
                                                 const std::string& train_hash) {
  if (c.train.empty()) {
    throw UsageError(std::string(to_string(config.mode)) + " model requires --train FILE");
  }
  if (!opt.cache.empty()) {
    // cache header: magic line, then the key the store was built for
    std::ostringstream key;
    key << train_hash << ' ' << to_string(config.mode) << ' ' << config.alphabet << ' ' << config.depth
        << (opt.letters ? " letters" : " bytes");
    const fs::path path = opt.cache + "." + std::string(to_string(config.mode)) + ".d" + std::to_string(config.depth);
    if (std::ifstream in(path, std::ios::binary); in) {
      std::string magic, stored_key;
      std::getline(in, magic);
      std::getline(in, stored_key);
      if (magic == "switchcode-count-cache-1" && stored_key == key.str()) {
        return std::make_shared<const CountStore>(CountStore::load(in));
      }
    }
    auto store = std::make_shared<const CountStore>(train(c.train, config));
    std::ostringstream blob;
    blob << "switchcode-count-cache-1\n" << key.str() << '\n';
    store->save(blob);
    write_atomically(path, blob.str());
    return store;
  }
  return std::make_shared<const CountStore>(train(c.train, config));
}

struct Prepared {
  Corpora corpora;
  std::vector<CodeModel> models;
  std::uint64_t max_n = 0;
};

Prepared prepare(const Options& opt, const std::string& command, RunManifest& manifest) {
  manifest.set("tool", "switchcode");
  manifest.set("version", kToolVersion);
  manifest.set("command", command);
  Prepared p;
  p.corpora = load_corpora(opt, manifest);
  p.max_n = resolve_max_n(opt, p.corpora);
  if (p.max_n < 2 || p.max_n > p.corpora.input.size()) {
    throw InputError("--max-n must be in [2, input length]");
  }
  const std::span<const Symbol> coded = std::span(p.corpora.input).first(p.max_n);

  ModelConfig base;
  base.alphabet = p.corpora.alphabet;
  base.alpha = opt.alpha;
  if (opt.smoothing == "lower-order") {
    base.smoothing = Smoothing::lower_order;
  } else if (opt.smoothing == "laplace" || opt.smoothing == "kt") {
    base.smoothing = Smoothing::additive;
    base.additive_weight = opt.smoothing == "laplace" ? 1.0 : 0.5;
  } else {
    throw UsageError("unknown smoothing '" + opt.smoothing + "'");
  }
  const bool auto_depth = opt.depth == "auto";
  if (!auto_depth) {
    const auto [ptr, ec] = std::from_chars(opt.depth.data(), opt.depth.data() + opt.depth.size(), base.depth);
    if (ec != std::errc{} || ptr != opt.depth.data() + opt.depth.size()) {
      throw UsageError("--depth expects a non-negative integer or 'auto'");
    }
  }
  base.validate();

  std::string names;
  std::string depths;
  const std::string train_hash = p.corpora.train.empty() ? "" : sha256_hex(p.corpora.train);
  for (const std::string& name : opt.models) {
    if (!names.empty()) {
      names += ',';
      depths += ',';
    }
    names += name;
    if (name == "lz") {
      p.models.push_back(CodeModel::lz_model(base.alphabet));
      depths += "-";
      continue;
    }
    ModelConfig config = base;
    config.mode = parse_mode(name);
    if (config.mode != Mode::plain && p.corpora.train.empty()) {
      throw UsageError(name + " model requires --train FILE");
    }
    if (auto_depth) {
      config.depth = config.mode == Mode::plain ? exact_depth(coded) : exact_depth(coded, p.corpora.train);
    }
    depths += std::to_string(config.depth);
    std::shared_ptr<const CountStore> store;
    if (config.mode != Mode::plain) store = training_store(opt, config, p.corpora, train_hash);
    p.models.push_back(CodeModel::switch_model(config, std::move(store)));
  }
  manifest.set("models", names);
  manifest.set("alphabet", static_cast<std::uint64_t>(base.alphabet));
  manifest.set("filter", opt.letters ? "letters27" : "none");
  std::ostringstream alpha;
  alpha.precision(17);
  alpha << base.alpha;
  manifest.set("alpha", alpha.str());
  manifest.set("depth_request", opt.depth);
  manifest.set("depth", depths);
  manifest.set("smoothing", opt.smoothing);
  manifest.set("max_n", p.max_n);
  return p;
}

void emit(const Options& opt, const std::string& csv, const RunManifest& manifest, std::ostream& out,
          const std::string& plot = {}) {
  if (opt.out.empty()) {
    out << csv;
    return;
  }
  write_atomically(opt.out, csv);
  if (!plot.empty()) write_atomically(opt.out + ".plot.dat", plot);
  std::ostringstream m;
  manifest.write(m);
  write_atomically(opt.out + ".manifest", m.str());
}

int cmd_rate(const Options& opt, std::ostream& out) {
  RunManifest manifest;
  const Prepared p = prepare(opt, "rate", manifest);
  std::vector<CodeLengthSeries> series;
  std::ostringstream plot;
  for (const CodeModel& model : p.models) {
    series.push_back(code_length_series(model, p.corpora.input, p.max_n, opt.input));
    write_plot_data(plot, model.name, rate_points(series.back()));
  }
  std::ostringstream csv;
  write_rate_csv(csv, series);
  emit(opt, csv.str(), manifest, out, plot.str());
  return 0;
}

int cmd_mi(const Options& opt, std::ostream& out) {
  RunManifest manifest;
  const Prepared p = prepare(opt, "mi", manifest);
  std::vector<MiSeries> series;
  std::ostringstream plot;
  for (const CodeModel& model : p.models) {
    series.push_back(mi_series(model, p.corpora.input, p.max_n, opt.input));
    write_plot_data(plot, model.name, to_points(series.back()));
  }
  std::ostringstream csv;
  write_mi_csv(csv, series);
  emit(opt, csv.str(), manifest, out, plot.str());
  return 0;
}

int cmd_gamma(const Options& opt, std::ostream& out) {
  RunManifest manifest;
  const Prepared p = prepare(opt, "gamma", manifest);
  const FitRange range = parse_fit_range(opt.fit_range);
  const FitMethod method = parse_fit_method(opt.fit_method);
  manifest.set("fit_method", opt.fit_method);
  manifest.set("fit_range", std::to_string(range.min_n) + ":" + std::to_string(range.max_n));
  std::vector<NamedFit> fits;
  std::vector<MiSeries> series;
  std::ostringstream plot;
  for (const CodeModel& model : p.models) {
    series.push_back(mi_series(model, p.corpora.input, p.max_n, opt.input));
    const auto points = to_points(series.back());
    write_plot_data(plot, model.name, points);
    fits.push_back({model.name, fit_power_law(points, range, method)});
  }
  std::ostringstream csv;
  write_fit_csv(csv, fits);
  emit(opt, csv.str(), manifest, out, plot.str());
  if (!opt.out.empty()) {
    std::ostringstream mi;
    write_mi_csv(mi, series);
    write_atomically(opt.out + ".mi.csv", mi.str());
  }
  return 0;
}

int cmd_depth(const Options& opt, std::ostream& out) {
  RunManifest manifest;
  manifest.set("tool", "switchcode");
  manifest.set("version", kToolVersion);
  manifest.set("command", "depth");
  const Corpora c = load_corpora(opt, manifest);
  std::ostringstream csv;
  csv << "text,length,depth,offset\n";
  const auto row = [&](const std::string& label, std::span<const Symbol> text) {
    const DepthResult r = max_repeat_length(text);
    csv << label << ',' << text.size() << ',' << r.depth << ',' << r.offset << '\n';
  };
  row("input", c.input);
  if (!c.train.empty()) {
    std::vector<Symbol> joined = c.train;
    joined.insert(joined.end(), c.input.begin(), c.input.end());
    row("train+input", joined);
  }
  emit(opt, csv.str(), manifest, out);
  return 0;
}

int cmd_lz(const Options& opt, std::ostream& out) {
  RunManifest manifest;
  manifest.set("tool", "switchcode");
  manifest.set("version", kToolVersion);
  manifest.set("command", "lz");
  const Corpora c = load_corpora(opt, manifest);
  const std::uint64_t n = opt.max_n != 0 ? opt.max_n : c.input.size();
  if (n == 0 || n > c.input.size()) throw InputError("--max-n must be in [1, input length]");
  const LzParse parse = lz_parse(std::span(c.input).first(n), c.alphabet);
  manifest.set("alphabet", static_cast<std::uint64_t>(c.alphabet));
  manifest.set("max_n", n);
  std::ostringstream csv;
  csv << "n,phrases,bits,rate_bpc\n"
      << n << ',' << parse.phrases.size() << ',' << detail::format_fixed(parse.code_bits) << ','
      << detail::format_fixed(parse.code_bits / static_cast<double>(n)) << '\n';
  emit(opt, csv.str(), manifest, out);
  return 0;
}

int cmd_gen(const GenOptions& opt, std::ostream& out) {
  if (opt.out.empty()) throw UsageError("gen requires --out FILE");
  if (opt.length == 0) throw UsageError("gen requires --length N >= 1");
  SourceSpec spec;
  if (opt.source == "iid") {
    const std::vector<double> probs = opt.probs.empty()
                                          ? std::vector<double>(static_cast<std::size_t>(opt.alphabet), 1.0 / opt.alphabet)
                                          : parse_numbers(opt.probs, ',');
    spec = SourceSpec::iid(probs, opt.seed);
  } else if (opt.source == "markov") {
    if (opt.table.empty()) throw UsageError("markov source requires --table");
    std::vector<double> table;
    std::stringstream rows(opt.table);
    std::string row;
    while (std::getline(rows, row, ';')) {
      const auto values = parse_numbers(row, ',');
      table.insert(table.end(), values.begin(), values.end());
    }
    spec = SourceSpec::markov(opt.alphabet, opt.order, std::move(table), opt.seed);
  } else {
    throw UsageError("unknown source '" + opt.source + "'");
  }
  const std::vector<Symbol> data = generate(spec, opt.length);
  write_atomically(opt.out, std::string(data.begin(), data.end()));
  RunManifest manifest;
  manifest.set("tool", "switchcode");
  manifest.set("version", kToolVersion);
  manifest.set("command", "gen");
  manifest.set("source", opt.source);
  manifest.set("alphabet", static_cast<std::uint64_t>(spec.alphabet));
  if (spec.kind == SourceKind::markov) manifest.set("order", static_cast<std::uint64_t>(spec.order));
  manifest.set("seed", opt.seed);
  manifest.set("length", opt.length);
  manifest.set("entropy_rate", detail::format_fixed(spec.entropy_rate(), 12));
  manifest.add_file("output", opt.out, data);
  std::ostringstream m;
  manifest.write(m);
  write_atomically(opt.out + ".manifest", m.str());
  out << "wrote " << opt.length << " symbols, entropy rate " << detail::format_fixed(spec.entropy_rate(), 6)
      << " bits/symbol\n";
  return 0;
}

void add_model_options(CLI::App& cmd, Options& opt, bool models, bool fit) {
  cmd.add_option("--input", opt.input, "Text to code (raw bytes)")->required();
  cmd.add_option("--train", opt.train, "Training corpus for fixed/preadapted models");
  cmd.add_option("--out", opt.out, "Output CSV (a .manifest is written next to it); stdout if omitted");
  cmd.add_option("--alphabet", opt.alphabet, "Alphabet size D (default 256, or 27 with --letters)")
      ->check(CLI::Range(2, 256));
  cmd.add_flag("--letters", opt.letters, "Lowercase and collapse to 26 letters plus one separator (D=27)");
  cmd.add_option("--max-n", opt.max_n, "Largest block length (default: largest power of two <= input length)");
  if (!models) return;
  cmd.add_option("--model", opt.models, "plain, fixed, preadapted or lz (repeatable, or comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember({"plain", "fixed", "preadapted", "lz"}));
  cmd.add_option("--alpha", opt.alpha, "Transition-weight exponent, > 1");
  cmd.add_option("--depth", opt.depth, "Depth cap s, or 'auto' for the exact depth of the text");
  cmd.add_option("--smoothing", opt.smoothing, "lower-order (default), laplace or kt")
      ->check(CLI::IsMember({"lower-order", "laplace", "kt"}));
  cmd.add_option("--cache", opt.cache, "Path prefix for cached training counts");
  if (fit) {
    cmd.add_option("--fit-range", opt.fit_range, "Block lengths MIN:MAX used in the power-law fit (default 8:)");
    cmd.add_option("--fit", opt.fit_method, "nonlinear (default) or loglog")
        ->check(CLI::IsMember({"nonlinear", "loglog"}));
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Switch-distribution code lengths, mutual information and Hilberg exponents", "switchcode"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Options rate, mi, gamma, depth, lz;
  GenOptions gen;
  CLI::App* rate_cmd = app.add_subcommand("rate", "Code lengths and compression rates at n = 2, 4, ...");
  add_model_options(*rate_cmd, rate, true, false);
  CLI::App* mi_cmd = app.add_subcommand("mi", "Pointwise mutual information between block halves");
  add_model_options(*mi_cmd, mi, true, false);
  CLI::App* gamma_cmd = app.add_subcommand("gamma", "Power-law fit of the mutual information (Hilberg exponent)");
  add_model_options(*gamma_cmd, gamma, true, true);
  CLI::App* depth_cmd = app.add_subcommand("depth", "Longest repeated substring length");
  add_model_options(*depth_cmd, depth, false, false);
  CLI::App* lz_cmd = app.add_subcommand("lz", "LZ78 code length of the input");
  add_model_options(*lz_cmd, lz, false, false);
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a synthetic source as raw symbol bytes");
  gen_cmd->add_option("--source", gen.source, "iid or markov")->check(CLI::IsMember({"iid", "markov"}));
  gen_cmd->add_option("--alphabet", gen.alphabet, "Alphabet size")->check(CLI::Range(2, 256));
  gen_cmd->add_option("--order", gen.order, "Markov order")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--probs", gen.probs, "iid symbol probabilities, comma separated (default uniform)");
  gen_cmd->add_option("--table", gen.table, "markov rows separated by ';', entries by ','");
  gen_cmd->add_option("--length", gen.length, "Number of symbols")->required();
  gen_cmd->add_option("--seed", gen.seed, "mt19937_64 seed");
  gen_cmd->add_option("--out", gen.out, "Output file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
  }

  try {
    if (*rate_cmd) return cmd_rate(rate, out);
    if (*mi_cmd) return cmd_mi(mi, out);
    if (*gamma_cmd) return cmd_gamma(gamma, out);
    if (*depth_cmd) return cmd_depth(depth, out);
    if (*lz_cmd) return cmd_lz(lz, out);
    if (*gen_cmd) return cmd_gen(gen, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace switchcode::cli
