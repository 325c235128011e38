#include <iostream>
#include <string>
#include <vector>

#include "boxbound/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return boxbound::cli::run(args, std::cout, std::cerr);
}
