#include <iostream>

#include "dgr/cli.hpp"

int main(int argc, char** argv) {
  return dgr::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
