#include <iostream>
#include <string>
#include <vector>

#include "localize/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return localize::cli::run(args, std::cout, std::cerr);
}
