#include <iostream>

#include "hhf/cli.hpp"

int main(int argc, char** argv) { return hhf::run_cli(argc, argv, std::cout, std::cerr); }
