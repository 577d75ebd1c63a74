#include <iostream>

#include "isrs/cli.hpp"

int main(int argc, char** argv) { return isrs::cli::cli_dispatch(argc, argv, std::cout, std::cerr); }
