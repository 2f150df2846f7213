#include "otto_cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return otto::cli::run(argc, argv, std::cout, std::cerr);
}
