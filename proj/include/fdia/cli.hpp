#pragma once

#include <iostream>

namespace fdia::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;  // also malformed artifacts
inline constexpr int kUsage = 2;

// Entry point of the `fdia` tool. FDIA_SEED in the environment makes all
// randomness deterministic; --seed overrides it.
int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace fdia::cli
