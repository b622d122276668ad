#include <iostream>
#include <string>
#include <vector>

#include "imbal/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return imbal::run_cli(args, std::cout, std::cerr);
}
