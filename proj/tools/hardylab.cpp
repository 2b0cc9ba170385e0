#include <iostream>

#include "hardylab/cli.hpp"

int main(int argc, char** argv) { return hardylab::main_entry(argc, argv, std::cout, std::cerr); }
