#include <iostream>

#include "lcdsc/cli.hpp"

int main(int argc, char** argv) { return lcdsc::cli::run(argc, argv, std::cout, std::cerr); }
