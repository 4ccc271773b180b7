#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperqif {

/// Runs the command-line driver. `args` excludes the program name.
/// Exit codes: 0 success, 1 analytic negative (a failed refinement check or
/// self-test), 2 usage or input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperqif
