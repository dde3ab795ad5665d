#include <iostream>

#include "apfree/cli.hpp"

int main(int argc, char** argv) { return apfree::cli_main(argc, argv, std::cin, std::cout, std::cerr); }
