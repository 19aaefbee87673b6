#include <cstdio>
#include <string>
#include <vector>

#include "metrokit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto result = metrokit::cli::run_command(args);
    std::fputs(result.output.c_str(), stdout);
    return result.exit_code;
}
