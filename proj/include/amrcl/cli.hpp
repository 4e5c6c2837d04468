#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amrcl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Runs one `amrcl` invocation. `args` excludes the program name. Results go
// to `out`, diagnostics and help for usage errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amrcl::cli
