#include <iostream>
#include <string>
#include <vector>

#include "chargeq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return chargeq::run_cli(args, std::cout, std::cerr);
}
