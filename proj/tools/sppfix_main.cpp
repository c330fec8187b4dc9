#include <iostream>
#include <string>
#include <vector>

#include "sppfix/sppfix.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sppfix::run_cli(args, std::cout, std::cerr);
}
