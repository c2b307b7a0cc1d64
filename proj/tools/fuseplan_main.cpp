#include <iostream>
#include <string>
#include <vector>

#include "fuseplan/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fuseplan::cli::run(args, std::cout, std::cerr, fuseplan::cli::color_enabled_for_stdout());
}
