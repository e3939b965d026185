#include <iostream>

#include "qregress/cli.hpp"

int main(int argc, char** argv) { return qregress::cli::run(argc, argv, std::cout, std::cerr); }
