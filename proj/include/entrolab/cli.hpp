#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entrolab {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitSchema = 2,     // bad config, flag or parameter
  kExitInvariant = 3,  // the described system is not a valid P-Lipschitz Markov map
};

// Runs `entrolab <args...>` (args exclude the program name). Results go to
// `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Writes through a temporary file in the same directory and renames it into
// place, so a failed run never leaves a partial file.
void write_atomic(const std::string& path, const std::string& content);

// Worker count for sweeps: ENTROLAB_THREADS when set and positive, else the
// hardware concurrency.
unsigned worker_count();

}  // namespace entrolab
