#pragma once

#include <iosfwd>

namespace kam::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationFailure = 1, // unparseable or invalid dataset
    kConfigError = 2,       // bad flags, weights file, inverse weights over a zero datum, I/O
    kInternalError = 3,     // solver disagreed with a structural guarantee
};

// Entry point of the `kam` tool. Reports go to `out` unless --output is
// given; diagnostics go to `err`, filtered by the KAM_LOG environment
// variable (error, info or debug; default error).
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace kam::cli
