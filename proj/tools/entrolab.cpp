#include <iostream>

#include "entrolab/cli.hpp"

int main(int argc, char** argv) {
  return entrolab::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
