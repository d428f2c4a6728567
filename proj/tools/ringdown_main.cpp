#include <string>
#include <vector>

#include "ringdown/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ringdown::cli::run(args);
}
