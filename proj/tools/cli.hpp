#pragma once

#include <iosfwd>

namespace gsynth::cli {

/// Process exit codes.
enum ExitCode : int {
  exit_reachable = 0,  // also: verify passed, gen/encode/bench succeeded
  exit_unreachable = 1,  // also: verify failed
  exit_unknown = 2,
  exit_usage = 64,
  exit_data = 65,
  exit_no_input = 66,
  exit_internal = 70,
  exit_io = 74,
};

/// Runs the gsynth command line. Subcommands: gen, encode, synth, verify,
/// oracle, bench.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gsynth::cli
