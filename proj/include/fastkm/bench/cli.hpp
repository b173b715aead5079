#pragma once

namespace fastkm::bench {

/// Subcommands: run, sweep, dynamics, plotdata. Returns 0 on success, 2 on
/// configuration/usage errors, 1 on runtime failures.
int cli_main(int argc, const char* const* argv);

}  // namespace fastkm::bench
