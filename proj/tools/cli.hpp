#pragma once

#include <iosfwd>

namespace vizsim {

/// Full command-line entry point, separated from main() so tests can drive
/// it in-process. Returns the process exit code: 0 success, 1 runtime
/// error, 2 usage or validation error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vizsim
