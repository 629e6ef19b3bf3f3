#include <iostream>

#include "tpskit/cli.hpp"

int main(int argc, char** argv) { return tpskit::cli_main(argc, argv, std::cout, std::cerr); }
