#include <iostream>

#include "sadele/cli.h"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return sadele::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
