#include "dltl/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dltl::run_cli(argc, argv, std::cout, std::cerr); }
