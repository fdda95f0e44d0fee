#include <iostream>

#include "hclab/cli/commands.hpp"

int main(int argc, char** argv) { return hclab::cli::run(argc, argv, std::cout, std::cerr); }
