#include <iostream>

#include "gfl/cli.hpp"

int main(int argc, char** argv) { return gfl::cli::run(argc, argv, std::cout, std::cerr); }
