#include <unistd.h>

#include <iostream>
#include <string>
#include <vector>

#include "wsd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  wsd::Console io{std::cin, std::cout, std::cerr, isatty(STDIN_FILENO) != 0};
  return wsd::run_cli(args, io);
}
