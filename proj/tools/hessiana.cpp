#include <iostream>

#include "hessiana/cli.hpp"

int main(int argc, char** argv) { return hessiana::cli_main(argc, argv, std::cout, std::cerr); }
