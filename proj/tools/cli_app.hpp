#pragma once

#include <string>
#include <vector>

#include "orbbuf/commands.hpp"

namespace orbbuf {

// Parses argv and dispatches to the chosen subcommand. Split from main()
// so tests can drive the full CLI in-process. Exit codes: 0 success,
// 1 usage, 2 bad input data, 3 simulation failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace orbbuf
