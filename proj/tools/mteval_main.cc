#include <iostream>
#include <string>
#include <vector>

#include "mteval/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mteval::cli::Run(args, std::cout, std::cerr);
}
