#pragma once

#include <functional>
#include <string>

#include "rbe/app/config.hpp"

namespace rbe::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,  // I/O and other runtime failures
  kExitConfig = 2,
  kExitNotConverged = 3,
  kExitOracle = 4,
};

using LogFn = std::function<void(const std::string&)>;

struct RunResult {
  int exit_code{kExitOk};
  std::string message;
  /// The report document as written to <out>/report.json.
  std::string report;
};

/// Runs cfg.mode and writes its artifacts into cfg.out (created if missing):
///   report.json    deterministic for a given config and thread count
///   timings.json   wall-clock per phase
///   field.bin      solve only, plus field.csv with csv: true
/// Non-convergence still writes the report and the last iterate.
/// Configuration problems map to kExitConfig; nothing is thrown.
RunResult run(const RunConfig& cfg, const LogFn& log = {});

/// The thread count from RBE_SLAB_THREADS, or 0 when unset or invalid.
int threads_from_env();

}  // namespace rbe::app
