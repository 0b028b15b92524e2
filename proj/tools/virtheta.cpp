#include "virtheta/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return virtheta::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
