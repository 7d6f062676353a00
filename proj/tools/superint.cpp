#include <iostream>

#include "superint/cli.hpp"

int main(int argc, char** argv) { return superint::cli::run(argc, argv, std::cout, std::cerr); }
