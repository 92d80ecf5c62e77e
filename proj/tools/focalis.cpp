#include <iostream>

#include "focalis/cli.hpp"

int main(int argc, char** argv) { return focalis::cli::run(argc, argv, std::cout, std::cerr); }
