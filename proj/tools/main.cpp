#include <iostream>

#include "zrlab/cli.hpp"

int main(int argc, char** argv) { return zrlab::cli_main(argc, argv, std::cout, std::cerr); }
