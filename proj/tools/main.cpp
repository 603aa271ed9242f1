#include <iostream>
#include <string>
#include <vector>

#include "logflat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return logflat::cli::main(args, std::cout, std::cerr);
}
