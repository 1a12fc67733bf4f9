#include <c3d/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return c3d::run_cli(argc, argv, std::cout, std::cerr); }
