#include <exception>
#include <iostream>

#include "matchdp/commands.hpp"

int main(int argc, char** argv) {
    try {
        return matchdp::run_cli(argc, argv, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
