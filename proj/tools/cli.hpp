#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace switchcode::cli {

// Entry point of the `switchcode` tool. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace switchcode::cli
