#include <iostream>

#include "brw/cli.hpp"

int main(int argc, char** argv) { return brw::cli_main(argc, argv, std::cout, std::cerr); }
