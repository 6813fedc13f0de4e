#include "rforge/cli.hpp"

int main(int argc, char** argv) {
    return rforge::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
