#include <iostream>

#include "yule/cli.hpp"

int main(int argc, char** argv) {
  return yule::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
