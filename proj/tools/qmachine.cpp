#include <iostream>
#include <string>
#include <vector>

#include "qmachine/cli.hpp"

int main(int argc, char** argv) {
  return qmachine::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
