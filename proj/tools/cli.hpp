#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lungsynth::cli {

enum ExitCode : int { kSuccess = 0, kDataError = 1, kUsageError = 2 };

/// Runs one invocation. `args` excludes the program name. Machine-readable
/// results go to `out` as JSON; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lungsynth::cli
