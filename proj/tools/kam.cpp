#include <iostream>

#include "kam/cli.hpp"

int main(int argc, char **argv) {
    return kam::cli::run(argc, argv, std::cout, std::cerr);
}
