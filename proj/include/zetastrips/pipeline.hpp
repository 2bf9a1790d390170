#pragma once

#include "zetastrips/analysis.hpp"
#include "zetastrips/cache.hpp"
#include "zetastrips/config.hpp"
#include "zetastrips/contour.hpp"
#include "zetastrips/gram.hpp"
#include "zetastrips/strips.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace zetastrips {

/// Everything `compute` produces, stage by stage.
struct Dataset {
    GramTable gram;
    std::vector<SpecialGramPoint> boundaries; // m = 1 .. m_max + 1
    std::vector<PrimaryZero> primaries;       // m = 1 .. m_max
    std::vector<std::vector<double>> zeros;   // per strip
    std::vector<Strip> strips;
};

/// Which stages were served from the cache.
struct ComputeReport {
    bool gram_cached = false;
    bool boundaries_cached = false;
    bool zeros_cached = false;
    bool strips_cached = false;

    bool fully_cached() const noexcept
    {
        return gram_cached && boundaries_cached && zeros_cached && strips_cached;
    }
};

/// Loads each stage from the cache when current, computes and stores it
/// otherwise. Corrupt entries are reported on `log` and recomputed.
Dataset compute_dataset(const RunConfig& config, Cache& cache, ComputeReport& report,
                        std::ostream& log);

/// Dataset rebuilt purely from the cache; nullopt if any stage is missing or
/// stale. Throws Error(CacheCorrupt) on integrity failures.
std::optional<Dataset> load_dataset(const RunConfig& config, const Cache& cache);

// Emitted artifacts (12 significant digits).
std::string gram_csv(const GramTable& gram);
std::string strips_csv(const std::vector<Strip>& strips);
std::string zeros_csv(const std::vector<Strip>& strips);
std::string deviations_csv(const DeviationSeries& bottom, const DeviationSeries& density);
std::string arches_csv(const std::vector<ArchPrediction>& arches);
std::string contour_csv(const ContourPath& path);

/// Summary of every fit and statistic; the body of fits.json.
struct AnalysisResult {
    LinearFit bottoms;
    LinearFit tops;
    DensityFit density;
    PrimaryStats primary;
    DeviationSeries bottom_dev;
    std::vector<ArchPrediction> arches;
    std::vector<BranchSpacing> branches;
    /// mean q=2 (resp. q=3) level gap over the mean q=1 gap, arches with
    /// m_center >= 40 only; reported, not asserted.
    std::optional<double> q2_over_q1;
    std::optional<double> q3_over_q1;
};

AnalysisResult analyze(const std::vector<Strip>& strips);
std::string fits_json(const AnalysisResult& result);

} // namespace zetastrips
