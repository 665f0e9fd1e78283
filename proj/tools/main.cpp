#include <iostream>

#include "sturm/cli.hpp"

int main(int argc, char** argv) { return sturm::cli::run(argc, argv, std::cout, std::cerr); }
