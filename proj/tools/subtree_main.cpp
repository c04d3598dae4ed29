#include <iostream>

#include "subtree/cli.hpp"

int main(int argc, char** argv) { return subtree::run(argc, argv, std::cout, std::cerr); }
