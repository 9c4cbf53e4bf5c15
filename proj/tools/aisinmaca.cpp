#include <iostream>
#include <string>
#include <vector>

#include "aisinmaca/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return aisinmaca::cli::run_cli(args, std::cout, std::cerr);
}
