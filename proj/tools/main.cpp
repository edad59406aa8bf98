#include "coldopt/cli.hpp"

int main(int argc, char** argv) {
    return coldopt::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
