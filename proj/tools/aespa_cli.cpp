#include <iostream>
#include <string>
#include <vector>

#include "aespa/cli.hpp"

int main(int argc, char** argv) {
  return aespa::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
