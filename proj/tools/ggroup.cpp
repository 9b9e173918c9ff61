#include <iostream>
#include <string>
#include <vector>

#include "ggroup/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ggroup::cli::run_cli(args, std::cout, std::cerr);
}
