#include <string>
#include <vector>

#include "flowids/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return flowids::run_command(args);
}
