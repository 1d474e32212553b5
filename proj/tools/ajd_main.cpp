#include <vector>

#include "ajd/cli.hpp"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ajd::cli::run(args);
}
