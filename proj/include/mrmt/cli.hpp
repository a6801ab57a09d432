#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrmt::cli {

enum ExitCode : int { kSuccess = 0, kValidation = 1, kNumerical = 2, kBudget = 3 };

// Entry point of the mixrmt tool; argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrmt::cli
