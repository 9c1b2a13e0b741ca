#include <vector>

#include "prbshare/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return prbshare::run_cli(args);
}
