#include <iostream>

#include "parrot/cli.hpp"

int main(int argc, char** argv) { return parrot::run_cli(argc, argv, std::cout, std::cerr); }
