#include <iostream>

#include "mathcast/cli.hpp"

int main(int argc, char** argv) { return mathcast::run_cli(argc, argv, std::cout, std::cerr); }
