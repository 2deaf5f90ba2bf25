#include <iostream>

#include "nanorevival/cli.hpp"

int main(int argc, char** argv) { return nanorevival::cli::run(argc, argv, std::cout, std::cerr); }
