#include <iostream>

#include "wpcn/cli.hpp"

int main(int argc, char** argv) { return wpcn::run_cli(argc, argv, std::cout, std::cerr); }
