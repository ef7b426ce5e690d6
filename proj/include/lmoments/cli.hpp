#pragma once

#include <iosfwd>

namespace lmoments {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitCheckFailed = 2,
  kExitIo = 3,
};

// Entry point shared by the executable and the tests. Data goes to `out`
// (or files), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lmoments
