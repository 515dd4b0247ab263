#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fconc::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Parses args (without the program name) and runs one subcommand. Reports
/// go to `out` unless --out names a file; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes to a sibling temp file, then renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace fconc::cli
