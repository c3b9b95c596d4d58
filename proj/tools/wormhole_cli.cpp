#include <iostream>

#include "wormhole/cli.hpp"

int main(int argc, char** argv)
{
    return wormhole::cli::run(argc, argv, std::cout, std::cerr);
}
