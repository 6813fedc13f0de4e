#ifndef RFORGE_CLI_HPP
#define RFORGE_CLI_HPP

#include <string>
#include <vector>

namespace rforge {

// Exit codes: 0 pass, 1 verification failure (report still written),
// 2 usage/configuration error. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace rforge

#endif
