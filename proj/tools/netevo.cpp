#include <iostream>
#include <string>
#include <vector>

#include "netevo/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return netevo::run_cli(args, std::cout, std::cerr);
}
