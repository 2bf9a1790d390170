#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zetastrips {

enum class ErrorKind {
    // evaluation
    PoleProximity,
    WindowExceeded,
    PrecisionLoss,
    DomainError,
    ConvergenceFailure,
    // contour tracing
    SeedDrift,
    StepCollapse,
    MaxSteps,
    NotSpecial,
    EscapedStrip,
    NoTerminalZero,
    PhaseJump,
    OffCriticalLine,
    // zero enumeration
    CountMismatch,
    EmptyStrip,
    // persistence / configuration
    InvalidConfig,
    Io,
    CacheMissing,
    CacheCorrupt,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for the kinds that indicate a numerical or structural anomaly in the
/// computed data (as opposed to configuration or I/O trouble).
bool is_math_anomaly(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<long> index = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    /// Strip / launch / Gram index the failure refers to, when known.
    std::optional<long> index() const noexcept { return index_; }

    /// Same error re-tagged with an index (keeps the original kind).
    Error with_index(long index) const;

private:
    ErrorKind kind_;
    std::optional<long> index_;
};

} // namespace zetastrips
