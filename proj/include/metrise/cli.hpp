#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace metrise {

/// Full command-line front end; returns the process exit code
/// (0 success, 2 input/parse error, 3 precondition failure, 4 internal).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace metrise
