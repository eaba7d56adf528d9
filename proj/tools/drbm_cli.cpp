#include <iostream>

#include "drbm/cli.hpp"

int main(int argc, char** argv) { return drbm::cli::run(argc, argv, std::cout, std::cerr); }
