#pragma once

#include <iosfwd>

namespace hllg {

enum ExitCode : int { exit_ok = 0, exit_numerical = 1, exit_usage = 2, exit_verification = 3 };

/// Entry point of the `hllg` tool. Subcommands: simulate, eigs, galerkin-run,
/// verify, energy, ops-test. Returns the process exit code.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hllg
