// cli.hpp
// Command-line dispatcher for the no3l tool. Reports go to `out`,
// diagnostics to `err`.
//
// Exit status: 0 success, 1 domain error (bad n, refused budget, invalid
// witness), 2 usage error.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace no3l::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace no3l::cli
