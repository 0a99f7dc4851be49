#include <iostream>
#include <string>
#include <vector>

#include "nestex/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nestex::dispatch(args, std::cout, std::cerr);
}
