#include <string>
#include <vector>

#include "pkcpc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pkcpc::cli::run_command(args);
}
