#include "casimir/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return casimir::cli::run(argc, argv, std::cout, std::cerr); }
