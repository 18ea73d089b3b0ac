#pragma once

#include <iosfwd>

namespace elicit::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, usage_error = 2, numeric_error = 3 };

/// Runs the command line; output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace elicit::cli
