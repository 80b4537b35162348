#include <iostream>

#include "medstat/cli.hpp"

int main(int argc, char** argv) {
  return medstat::cli::run(argc, argv, std::cout, std::cerr);
}
