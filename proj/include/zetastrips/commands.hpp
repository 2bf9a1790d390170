#pragma once

#include "zetastrips/config.hpp"
#include "zetastrips/pipeline.hpp"

#include <iosfwd>
#include <vector>

namespace zetastrips {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 1,
    kExitMathAnomaly = 2,
    kExitMissingInput = 3,
    kExitUsage = 4,
    kExitVerifyFailed = 5,
};

struct ComputeOptions {
    /// Launch indices whose traced contours are written as contour_k<k>.csv.
    std::vector<long> dump_contours;
};

/// Fills the cache and writes gram.csv, strips.csv and zeros.csv.
int cmd_compute(const RunConfig& config, std::ostream& out, std::ostream& err,
                const ComputeOptions& options = {}, ComputeReport* report = nullptr);

/// Writes fits.json, deviations.csv and arches.csv from the cache and prints
/// a key=value summary.
int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Renders fig<figure>.svg (1..16) from the emitted artifacts.
int cmd_plot(const RunConfig& config, int figure, std::ostream& out, std::ostream& err);

/// Quick self-contained oracle battery (t <= 100) plus a cache checksum audit.
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace zetastrips
