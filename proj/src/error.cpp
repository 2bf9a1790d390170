#include "zetastrips/error.hpp"

namespace zetastrips {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::WindowExceeded: return "WindowExceeded";
    case ErrorKind::PrecisionLoss: return "PrecisionLoss";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::SeedDrift: return "SeedDrift";
    case ErrorKind::StepCollapse: return "StepCollapse";
    case ErrorKind::MaxSteps: return "MaxSteps";
    case ErrorKind::NotSpecial: return "NotSpecial";
    case ErrorKind::EscapedStrip: return "EscapedStrip";
    case ErrorKind::NoTerminalZero: return "NoTerminalZero";
    case ErrorKind::PhaseJump: return "PhaseJump";
    case ErrorKind::OffCriticalLine: return "OffCriticalLine";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::EmptyStrip: return "EmptyStrip";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
    case ErrorKind::CacheMissing: return "CacheMissing";
    case ErrorKind::CacheCorrupt: return "CacheCorrupt";
    }
    return "Unknown";
}

bool is_math_anomaly(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::Io:
    case ErrorKind::CacheMissing:
    case ErrorKind::CacheCorrupt:
        return false;
    default:
        return true;
    }
}

namespace {

std::string decorate(ErrorKind kind, const std::string& what, std::optional<long> index)
{
    std::string msg(to_string(kind));
    if (index) {
        msg += " [index " + std::to_string(*index) + "]";
    }
    msg += ": ";
    msg += what;
    return msg;
}

} // namespace

Error::Error(ErrorKind kind, const std::string& what, std::optional<long> index)
    : std::runtime_error(decorate(kind, what, index)), kind_(kind), index_(index)
{
}

Error Error::with_index(long index) const
{
    // strip the old decoration, keep the detail text
    std::string detail = what();
    if (auto pos = detail.find(": "); pos != std::string::npos) {
        detail = detail.substr(pos + 2);
    }
    return Error(kind_, detail, index);
}

} // namespace zetastrips
