#include <iostream>

#include "fuzzy_spectra/cli.hpp"

int main(int argc, char** argv) { return fuzzy::cli::main_entry(argc, argv, std::cout, std::cerr); }
