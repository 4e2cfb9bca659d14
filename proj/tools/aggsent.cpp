#include <iostream>

#include "aggsent/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return aggsent::cli::run(args, std::cout, std::cerr);
}
