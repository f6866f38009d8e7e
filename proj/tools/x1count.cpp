#include <iostream>

#include "x1/cli.hpp"

int main(int argc, char** argv) { return x1::cli_main(argc, argv, std::cout, std::cerr); }
