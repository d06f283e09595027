// Codes a file with the plain switch distribution and prints the running
// compression rate at n = 2, 4, 8, ... together with the share of the
// probability mass held by each Markov order.
//
//   rate_of_text FILE [DEPTH]

#include <cstdio>
#include <cstdlib>
#include <exception>

#include "switchcode/switchcode.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s FILE [DEPTH]\n", argv[0]);
    return 2;
  }
  try {
    const std::vector<switchcode::Symbol> text = switchcode::read_corpus(argv[1]);
    switchcode::ModelConfig config;
    if (argc > 2) config.depth = std::atoi(argv[2]);
    switchcode::SwitchState state(config);

    std::uint64_t next_report = 2;
    for (std::size_t i = 0; i < text.size(); ++i) {
      state.step(text[i]);
      if (state.consumed() != next_report) continue;
      next_report *= 2;
      std::printf("%10llu  %7.4f bpc  orders:", static_cast<unsigned long long>(state.consumed()),
                  state.code_length_bits() / static_cast<double>(state.consumed()));
      const std::vector<double> share = state.order_posterior();
      for (double s : share) std::printf(" %.3f", s);
      std::printf("\n");
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
