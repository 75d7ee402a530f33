#include <iostream>
#include <string>
#include <vector>

#include "hypme/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hypme::dispatch(args, std::cout, std::cerr);
}
