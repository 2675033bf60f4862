#include <iostream>

#include "opcalc/cli.hpp"

int main(int argc, char** argv) { return opcalc::cli::run(argc, argv, std::cout, std::cerr); }
