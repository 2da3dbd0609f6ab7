#include <iostream>
#include <string>
#include <vector>

#include "deltamod/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return deltamod::dispatch(args, std::cout, std::cerr);
}
