#include <iostream>

#include "tropic/io.hpp"

int main(int argc, char** argv) {
    return tropic::run_command(argc, argv, std::cout, std::cerr);
}
