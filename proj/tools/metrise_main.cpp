#include <iostream>
#include <vector>

#include "metrise/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return metrise::run_cli(args, std::cout, std::cerr);
}
