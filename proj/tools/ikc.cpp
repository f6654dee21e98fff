#include <iostream>

#include "ikc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ikc::run_cli(args, std::cout, std::cerr);
}
