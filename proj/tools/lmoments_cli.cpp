#include <iostream>

#include "lmoments/cli.hpp"

int main(int argc, char** argv) {
  return lmoments::run_cli(argc, argv, std::cout, std::cerr);
}
