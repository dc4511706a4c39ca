#include <iostream>

#include "wsum/cli.hpp"

int main(int argc, char** argv) { return wsum::cli::run(argc, argv, std::cout, std::cerr); }
