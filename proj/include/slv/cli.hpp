#pragma once

#include <string>
#include <vector>

namespace slv {

/// Command-line entry point.  Exit codes: 0 success, 2 configuration or
/// usage error, 3 numeric failure, 4 failed property check.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

} // namespace slv
