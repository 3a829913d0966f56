#include <iostream>
#include <string>
#include <vector>

#include "horizon/run.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return horizon::cli::main_entry(args, std::cout, std::cerr);
}
