#pragma once

#include <string>
#include <vector>

namespace ebprior::cli {

/// Entry point of the `ebprior` command. Returns the process exit code:
/// 0 success, 2 invalid input or configuration, 3 numerical failure.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace ebprior::cli
