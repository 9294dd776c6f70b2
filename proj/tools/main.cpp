#include <iostream>

#include "hllg/cli.hpp"

int main(int argc, char** argv) { return hllg::cli_dispatch(argc, argv, std::cout, std::cerr); }
