#include <iostream>
#include <string>
#include <vector>

#include "rbe/cli.hpp"

int main(int argc, char** argv) {
  return rbe::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
