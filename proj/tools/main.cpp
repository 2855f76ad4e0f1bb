#include "cli_commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return shellproj::cli::run(argc, argv, std::cout, std::cerr); }
