#pragma once

#include <iosfwd>

namespace rcdlab::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { Pass = 0, PropertyFailure = 1, InputError = 2 };

/// Entry point of the rcdlab tool; reports go to `out`, diagnostics to
/// `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rcdlab::cli
