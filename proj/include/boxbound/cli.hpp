#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace boxbound::cli {

// Exit codes of `run`.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNumericalError = 2;

// Environment variable consulted for the default of --format.
inline constexpr const char* kFormatEnv = "BOXBOUND_FORMAT";

// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace boxbound::cli
