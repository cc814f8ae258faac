#include <iostream>

#include "vagap/commands.hpp"

int main(int argc, char** argv) { return vagap::run_cli(argc, argv, std::cout, std::cerr); }
