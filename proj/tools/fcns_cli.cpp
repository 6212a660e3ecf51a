#include <iostream>

#include "fcns/cli.hpp"

int main(int argc, char** argv) { return fcns::run_cli(argc, argv, std::cout, std::cerr); }
