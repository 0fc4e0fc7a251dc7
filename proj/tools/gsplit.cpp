#include <iostream>

#include "gsplit/cli.hpp"

int main(int argc, char** argv) { return gsplit::run_cli(argc, argv, std::cout, std::cerr); }
