#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace speiser_lab {

/// Entry point of the `speiser-lab` tool. Returns the process exit code:
/// 0 success, 2 usage or input error, 3 numerical non-convergence.
int run_command(int argc, char** argv);
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace speiser_lab
