#include <iostream>
#include <string>
#include <vector>

#include "qstatic/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qstatic::cli::run(args, std::cout, std::cerr);
}
