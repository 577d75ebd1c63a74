#pragma once

#include <ostream>

namespace isrs::cli {

enum ExitCode : int { ok = 0, usage = 1, validation = 2, acceptance = 3 };

/// Runs one subcommand (simulate, oracle-check, polar-scan, analyze, presets).
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isrs::cli
