#include <iostream>

#include "wfollow/cli.hpp"

int main(int argc, char** argv) { return wfollow::cli::main(argc, argv, std::cout, std::cerr); }
