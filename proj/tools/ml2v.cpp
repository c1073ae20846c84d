#include <iostream>
#include <string>
#include <vector>

#include "ml2v/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return ml2v::cli::run(args, std::cout, std::cerr);
}
