#pragma once

namespace notecrack::cli {

/// Parses argv and runs one subcommand. Exit codes: 0 success, 2 usage
/// error, 3 data-format error, 4 internal invariant failure.
int run_cli(int argc, const char* const* argv);

}  // namespace notecrack::cli
