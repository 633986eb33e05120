#include <string>
#include <vector>

#include "walshlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return walshlab::run_cli(std::move(args));
}
