#include <iostream>

#include "semio/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return semio::cli::run(args, std::cout, std::cerr);
}
