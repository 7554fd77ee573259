#include <iostream>

#include "cqed/cli.hpp"

int main(int argc, char** argv) { return cqed::run_cli(argc, argv, std::cout, std::cerr); }
