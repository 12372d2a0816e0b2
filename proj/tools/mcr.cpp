#include <iostream>

#include "mcr/cli/run.hpp"

int main(int argc, char** argv) { return mcr::cli::main(argc, argv, std::cout, std::cerr); }
