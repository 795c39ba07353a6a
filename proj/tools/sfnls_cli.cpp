#include <iostream>

#include "sfnls/cli.hpp"

int main(int argc, char** argv) { return sfnls::cli_main(argc, argv, std::cout, std::cerr); }
