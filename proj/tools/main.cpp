#include <iostream>

#include "polytheta_cli.hpp"

int main(int argc, char** argv) { return polytheta::cli::run(argc, argv, std::cout, std::cerr); }
