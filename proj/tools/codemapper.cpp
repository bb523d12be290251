#include <iostream>
#include <string>
#include <vector>

#include "codemap/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return codemap::cli::run(args, std::cout, std::cerr);
}
