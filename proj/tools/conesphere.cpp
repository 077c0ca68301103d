#include <iostream>

#include "conesphere/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return conesphere::run_cli(args, std::cout, std::cerr);
}
