#pragma once

#include "zetastrips/contour.hpp"
#include "zetastrips/gram.hpp"
#include "zetastrips/zeta.hpp"

#include <optional>
#include <vector>

namespace zetastrips {

/// A zero of zeta on the critical line.
struct ZeroRecord {
    long j = 0;       // 1-based global index by height
    double t = 0.0;
    long strip_m = 0; // 0 when not yet assigned to a strip
};

/// Band between the boundary contours through special Gram points m and m+1.
/// Owns its bottom edge, not its top.
struct Strip {
    long m = 0;
    double bottom = 0.0;
    double top = 0.0;
    double width = 0.0;
    long gram_count = 0;
    std::vector<ZeroRecord> zeros;
    long primary_index = 0; // 1-based from the bottom
    double primary_height = 0.0;
    double primary_stat = 0.0; // (primary_index - 0.5) / zeros.size()

    long n_zeros() const noexcept { return static_cast<long>(zeros.size()); }
};

/// Zeros of Hardy's Z in [t_lo, t_hi): grid scan at spacing gap_model(t_hi)/8
/// then bisection of every sign change to 1e-9. With `expected_count` the
/// grid is halved up to four times until the count matches, after which
/// CountMismatch is raised. Returned records carry j = 1, 2, ... and strip 0.
std::vector<ZeroRecord> find_zeros(double t_lo, double t_hi, const EvalParams& eval,
                                   std::optional<long> expected_count = std::nullopt);

/// Number of strips fully resolved below t_max by the launch-height model.
long strips_below(double t_max);

std::vector<SpecialGramPoint> trace_boundaries(long m_first, long m_last, const EvalParams& eval,
                                               const TraceParams& trace, unsigned threads);

std::vector<PrimaryZero> trace_primaries(const std::vector<SpecialGramPoint>& boundaries,
                                         const EvalParams& eval, const TraceParams& trace,
                                         unsigned threads);

/// Zeros of every strip spanned by consecutive boundaries, matched against
/// the strip's Gram count.
std::vector<std::vector<double>> enumerate_strip_zeros(
    const std::vector<SpecialGramPoint>& boundaries, const EvalParams& eval, unsigned threads);

/// Combines the stage outputs into strips and checks every strip invariant.
/// `boundaries` holds m = 1 .. m_max + 1; the other inputs one entry per strip.
std::vector<Strip> assemble_strips(const std::vector<SpecialGramPoint>& boundaries,
                                   const std::vector<PrimaryZero>& primaries,
                                   const std::vector<std::vector<double>>& zeros,
                                   const GramTable& gram);

/// Throws on the first violated strip invariant.
void check_strip(const Strip& strip, const GramTable& gram);

/// All stages for strips 1 .. m_max.
std::vector<Strip> build_strips(long m_max, const EvalParams& eval, const TraceParams& trace,
                                unsigned threads = 1);

/// Zero density of a strip: zeros / width.
double zeros_per_width(const Strip& strip);

} // namespace zetastrips
