#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace permcycles::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kValidationError = 1, kResourceError = 2 };

/// Runs one command line (without the program name). Machine-readable
/// output goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace permcycles::cli
