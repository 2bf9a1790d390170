#pragma once

#include "zetastrips/contour.hpp"
#include "zetastrips/zeta.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace zetastrips {

struct RunConfig {
    double t_max = 1e4;
    /// Derived from t_max when unset.
    std::optional<long> m_max;
    unsigned threads = 1;
    std::filesystem::path out_dir = "out";
    std::filesystem::path cache_dir = "cache";
    EvalParams eval;
    TraceParams trace;

    long resolved_m_max() const;

    /// Throws Error(InvalidConfig).
    void validate() const;

    /// Identifies everything that changes computed data (not threads or paths).
    std::string fingerprint() const;
};

/// Applies one `key = value` setting; unknown keys are an InvalidConfig error.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Reads `key = value` lines; '#' starts a comment.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// --precision: values looser than the admissible 1e-6 are clamped to it.
/// Returns true when clamping happened.
bool set_precision(RunConfig& config, double target);

} // namespace zetastrips
