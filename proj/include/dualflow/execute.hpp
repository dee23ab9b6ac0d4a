#pragma once

#include <iosfwd>
#include <stdexcept>

#include "dualflow/config.hpp"

namespace dualflow {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitStepFailure = 3, kExitIo = 4 };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs the configured preset and writes its artifacts under config.output:
///   flow presets: diagnostics.csv, snapshots/, summary.txt
///   dual_pair:    additionally diagnostics_h.csv and a dual_distance column
///   suites:       a report table (property.txt, duality.txt, residuals.txt) and summary.txt
/// Progress lines go to `log` when non-null. Returns the process exit code.
int execute(const RunConfig& config, std::ostream* log = nullptr);

}  // namespace dualflow
