#include <iostream>

#include "foliar/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return foliar::run(args, std::cout, std::cerr);
}
