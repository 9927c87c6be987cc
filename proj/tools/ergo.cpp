#include <iostream>

#include "ergo/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ergo::cli::run(args, std::cout, std::cerr);
}
