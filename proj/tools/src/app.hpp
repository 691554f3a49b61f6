#pragma once

#include <ostream>

#include "manifest.hpp"

namespace becflow::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInvalidConfig = 2,
  kNoConvergence = 3,
  kBracketFailure = 4,
};

/// Parses the command line, runs one subcommand and writes its CSV to
/// --out (plus a <out>.manifest.json sidecar) or to `out`. Diagnostics go
/// to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs a resolved manifest and writes the complete output file to `out`.
/// Library errors propagate as exceptions; a nonzero return means the run
/// finished but some part of it failed (a sweep row, a pair check).
int execute(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Maps the exception in flight to an exit code and reports it on `err`.
int report_exception(std::ostream& err);

}  // namespace becflow::cli
