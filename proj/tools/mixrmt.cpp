#include <iostream>
#include <string>
#include <vector>

#include "mrmt/cli.hpp"

int main(int argc, char** argv) {
  return mrmt::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
