#include <iostream>

#include "siac/cli.hpp"

int main(int argc, char** argv) { return siac::run_cli(argc, argv, std::cout, std::cerr); }
