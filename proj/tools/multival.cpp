#include <iostream>
#include <string>
#include <vector>

#include "multival/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return multival::run(args, std::cout, std::cerr);
}
