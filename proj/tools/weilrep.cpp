#include "weil/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return weil::run_cli(argc, argv, std::cout, std::cerr); }
