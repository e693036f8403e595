#pragma once

#include <string>
#include <vector>

namespace pathbs::cli {

// Exit codes: 0 success, 1 validation/config error, 2 numeric failure.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace pathbs::cli
