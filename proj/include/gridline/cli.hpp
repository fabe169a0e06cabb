#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gridline {

/// Runs one CLI invocation. `args` excludes the program name. Returns the exit
/// code: 0 success, 2 usage or validation error, 1 internal error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridline
