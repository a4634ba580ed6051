#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  // Default cap overrides, read once.
  const char* env = std::getenv("SUPERPAT_CAPS");
  std::vector<std::string> args(argv + 1, argv + argc);
  return superpat::cli::run_cli(args, std::cout, std::cerr, env ? env : "");
}
