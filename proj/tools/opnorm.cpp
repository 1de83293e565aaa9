#include <iostream>

#include "opnorm/cli.hpp"

int main(int argc, char** argv) { return opnorm::cli::main(argc, argv, std::cout, std::cerr); }
