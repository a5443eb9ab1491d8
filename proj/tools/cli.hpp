#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anybn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Runs the command line (args excludes the program name). Output files go
/// under --out-dir; progress and errors go to `out` / `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace anybn::cli
