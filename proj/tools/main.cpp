#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto r = sbfe::cli::run_args(args);
  std::cout << r.out;
  std::cerr << r.err;
  return r.status;
}
