#pragma once

#include <iostream>

namespace tgcut {

/// Exit codes of the command line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitInternal = 3 };

/// Runs the `tgcut` command line: segment, evaluate, phantom, convert, serve.
int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

} // namespace tgcut
