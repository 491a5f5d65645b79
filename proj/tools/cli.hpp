#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace avgq::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kParse = 2;
inline constexpr int kLimit = 3;
inline constexpr int kPrecondition = 4;
inline constexpr int kUnknownExperiment = 5;

// Runs the command line `args` (args[0] is the program name). Reports go to
// `out` (unless --out names a file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace avgq::cli
