#include "rcdlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return rcdlab::cli::run(argc, argv, std::cout, std::cerr);
}
