#include <iostream>

#include "dpadmm/cli.hpp"

int main(int argc, char** argv) { return dpadmm::cli_main(argc, argv, std::cout, std::cerr); }
