#pragma once

#include <iosfwd>

namespace sdmce::cli
{

enum ExitCode : int {
    ok = 0,
    input_error = 1,
    solver_error = 2,
    residual_foldings = 3,
    io_error = 4,
};

/// Runs the command line `argv[0..argc)`. Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdmce::cli
