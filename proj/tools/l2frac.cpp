#include <iostream>

#include "l2frac/cli.hpp"

int main(int argc, char** argv) {
    using namespace l2frac::cli;
    RunConfig config;
    try {
        config = parse_args(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    }
    try {
        return run(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
}
