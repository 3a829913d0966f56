#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "horizon/config.hpp"

namespace horizon::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

// Executes config.command and writes the artifact to `out`. Rows that fail are
// listed in a trailing failure manifest; the return value is the exit code.
int run(const RunConfig& config, std::ostream& out);

// Full front end: parse, open the output, run, map errors to exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& stdout_stream,
               std::ostream& stderr_stream);

} // namespace horizon::cli
