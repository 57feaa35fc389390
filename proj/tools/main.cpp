#include "conekit/cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return conekit::run_cli(argc, argv, std::cout, std::cerr); }
