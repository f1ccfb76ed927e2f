#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cogarq::cli {

enum ExitCode : int { ok = 0, validation_failed = 1, usage = 2, infeasible = 3, numerical = 4 };

/// Runs the command line (args excludes the program name). Data goes to
/// `out` unless --out / output.path names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cogarq::cli
