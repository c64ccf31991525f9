#pragma once

// Command-line entry point. Exit codes: 0 success or pass, 1 bound
// violation, 2 input error.

#include <iosfwd>
#include <string>
#include <vector>

namespace carleman::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;

/// args excludes the program name. Output goes to `out` unless --out is set.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace carleman::cli
