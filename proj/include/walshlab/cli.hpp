#ifndef WALSHLAB_CLI_HPP
#define WALSHLAB_CLI_HPP

#include <string>
#include <vector>

namespace walshlab {

/// Command-line entry point. Exit code 0 on success, 1 when a verification
/// or invariant check failed, 2 on invalid configuration.
int run_cli(std::vector<std::string> args);

} // namespace walshlab

#endif
