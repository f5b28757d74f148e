#include <iostream>
#include <string>
#include <vector>

#include "wmopt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wmopt::cli::run(args, std::cout, std::cerr);
}
