#include <iostream>

#include "lingvar/cli.hpp"

int main(int argc, char** argv) { return lingvar::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
