#pragma once

#include <iosfwd>

namespace c3d {

/// Entry point of the c3d_cli executable. Subcommands: synth, eval-loss,
/// brute-force, grad-check, refine, metrics, ablation. Returns the process
/// exit code; normal output goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace c3d
