#include <iostream>

#include "lmprim/cli.hpp"

int main(int argc, char** argv) { return lmprim::cli::run(argc, argv, std::cout, std::cerr); }
