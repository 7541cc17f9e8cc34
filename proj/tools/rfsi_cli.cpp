#include <iostream>

#include "rfsi/workbench.hpp"

int main(int argc, char **argv) { return rfsi::run_cli(argc, argv, std::cout, std::cerr); }
