#include <iostream>

#include "plancog/cli.hpp"

int main(int argc, char** argv) { return plancog::run(argc, argv, std::cout, std::cerr); }
