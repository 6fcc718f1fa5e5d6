#pragma once

#include <iosfwd>

namespace castor {

// Exit codes of the command-line tool.
inline constexpr int kExitOk{0};
inline constexpr int kExitInternal{1};
inline constexpr int kExitUsage{2};
inline constexpr int kExitData{3};
inline constexpr int kExitNumeric{4};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace castor
