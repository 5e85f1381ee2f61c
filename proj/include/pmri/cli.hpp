#pragma once

#include <iosfwd>

namespace pmri {

// Exit codes: 0 success, 1 usage error, 2 data error. Diagnostics go to err
// as a single line.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pmri
