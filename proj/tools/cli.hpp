#pragma once

#include <iosfwd>

namespace stationary_lab::cli {

enum ExitCode { ok = 0, usage = 1, not_converged = 2, unexpected_verdict = 3 };

/// Runs the stationary-lab command line. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stationary_lab::cli
