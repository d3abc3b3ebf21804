#include <iostream>
#include <string>
#include <vector>

#include "optstop/cli/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return optstop::cli::run_cli(args, std::cout, std::cerr);
}
