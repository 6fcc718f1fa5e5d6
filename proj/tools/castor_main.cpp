#include <iostream>

#include "castor/cli.hpp"

int main(int argc, char** argv) { return castor::run_cli(argc, argv, std::cout, std::cerr); }
