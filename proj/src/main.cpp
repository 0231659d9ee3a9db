#include <iostream>

#include "acalc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return acalc::run_cli(args, std::cout, std::cerr);
}
