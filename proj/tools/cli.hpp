#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hoarith::cli {

enum ExitCode : int { kOk = 0, kFalse = 1, kUnknown = 2, kUsage = 3 };

/// Runs one command. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hoarith::cli
