#include "extremal/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return extremal::run_cli(argc, argv, std::cout, std::cerr); }
