#include <iostream>
#include <string>
#include <vector>

#include "gl2kit_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gl2kit::cli::run(args, std::cout, std::cerr);
}
