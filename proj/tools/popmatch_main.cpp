#include <iostream>

#include "popmatch/cli.hpp"

int main(int argc, char** argv) { return popmatch::cli::run(argc, argv, std::cout, std::cerr); }
