#include <iostream>

#include "qsr/cli.hpp"

int main(int argc, char** argv) { return qsr::cli::run(argc, argv, std::cout, std::cerr); }
