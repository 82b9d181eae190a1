#include <iostream>

#include "conerank/cli.hpp"

int main(int argc, char** argv) {
  return conerank::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
