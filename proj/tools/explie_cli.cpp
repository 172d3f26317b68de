#include <iostream>
#include <string>
#include <vector>

#include "explie/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return explie::cli::run_command(args, std::cout, std::cerr);
}
