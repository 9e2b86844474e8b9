#include <iostream>

#include "leakmip/cli.hpp"

int main(int argc, char** argv) { return leakmip::run_cli(argc, argv, std::cout, std::cerr); }
