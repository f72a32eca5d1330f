#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fwtopo::cli {

enum ExitCode : int { kOk = 0, kClaimFailure = 1, kConfigError = 2, kNumericalFailure = 3 };

// args excludes the program name. Reports go to `out` (or --out); diagnostics
// go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fwtopo::cli
