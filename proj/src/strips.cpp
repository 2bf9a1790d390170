#include "zetastrips/strips.hpp"

#include "zetastrips/error.hpp"
#include "zetastrips/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace zetastrips {

namespace {

constexpr int kMaxRefinements = 4;
constexpr double kBisectionTol = 1e-9;
// Boundary heights agree with the Gram table far below this.
constexpr double kEdgeShift = 1e-7;

double bisect_sign_change(double lo, double z_lo, double hi, const EvalParams& eval)
{
    while (hi - lo > kBisectionTol) {
        const double mid = 0.5 * (lo + hi);
        const double z_mid = hardy_z(mid, eval);
        if (z_mid == 0.0) {
            return mid;
        }
        if ((z_mid < 0.0) == (z_lo < 0.0)) {
            lo = mid;
            z_lo = z_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> scan(double t_lo, double t_hi, double spacing, const EvalParams& eval)
{
    const auto cells = static_cast<long>(std::ceil((t_hi - t_lo) / spacing));
    const double h = (t_hi - t_lo) / static_cast<double>(cells);
    std::vector<double> roots;
    double prev_t = t_lo;
    double prev_z = hardy_z(t_lo, eval);
    for (long i = 1; i <= cells; ++i) {
        const double t = i == cells ? t_hi : t_lo + static_cast<double>(i) * h;
        const double z = hardy_z(t, eval);
        if (prev_z == 0.0) {
            roots.push_back(prev_t);
        } else if ((z < 0.0) != (prev_z < 0.0) && z != 0.0) {
            roots.push_back(bisect_sign_change(prev_t, prev_z, t, eval));
        }
        prev_t = t;
        prev_z = z;
    }
    return roots;
}

} // namespace

std::vector<ZeroRecord> find_zeros(double t_lo, double t_hi, const EvalParams& eval,
                                   std::optional<long> expected_count)
{
    if (!(t_lo >= 7.0 && t_lo < t_hi && t_hi <= kWindowTMax)) {
        throw Error(ErrorKind::DomainError, "find_zeros requires 7 <= t_lo < t_hi <= 1.1e4");
    }
    double spacing = gap_model(t_hi) / 8.0;
    std::vector<double> roots = scan(t_lo, t_hi, spacing, eval);
    for (int r = 0; expected_count && static_cast<long>(roots.size()) != *expected_count; ++r) {
        if (r == kMaxRefinements) {
            std::ostringstream msg;
            msg << "found " << roots.size() << " zeros in [" << t_lo << ", " << t_hi
                << "), expected " << *expected_count;
            throw Error(ErrorKind::CountMismatch, msg.str());
        }
        spacing *= 0.5;
        roots = scan(t_lo, t_hi, spacing, eval);
    }

    std::vector<ZeroRecord> out;
    out.reserve(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        out.push_back({static_cast<long>(i) + 1, roots[i], 0});
    }
    return out;
}

long strips_below(double t_max)
{
    const double strip_height = 2.0 * std::numbers::pi / std::numbers::ln2;
    return static_cast<long>(std::floor(t_max / strip_height)) - 1;
}

std::vector<SpecialGramPoint> trace_boundaries(long m_first, long m_last, const EvalParams& eval,
                                               const TraceParams& trace, unsigned threads)
{
    if (m_first < 1 || m_last < m_first) {
        throw Error(ErrorKind::DomainError, "empty boundary range");
    }
    std::vector<SpecialGramPoint> out(static_cast<std::size_t>(m_last - m_first + 1));
    parallel_for(out.size(), threads, [&](std::size_t i) {
        out[i] = special_gram_point(m_first + static_cast<long>(i), eval, trace);
    });
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (!(out[i].height > out[i - 1].height)) {
            std::ostringstream msg;
            msg << "boundary contours out of order: " << out[i - 1].height << " >= "
                << out[i].height;
            throw Error(ErrorKind::NotSpecial, msg.str(), out[i].m);
        }
    }
    return out;
}

std::vector<PrimaryZero> trace_primaries(const std::vector<SpecialGramPoint>& boundaries,
                                         const EvalParams& eval, const TraceParams& trace,
                                         unsigned threads)
{
    if (boundaries.size() < 2) {
        return {};
    }
    std::vector<PrimaryZero> out(boundaries.size() - 1);
    parallel_for(out.size(), threads, [&](std::size_t i) {
        out[i] = primary_zero_of_strip(boundaries[i].m, eval, trace,
                                       std::pair{boundaries[i].height, boundaries[i + 1].height});
    });
    return out;
}

std::vector<std::vector<double>> enumerate_strip_zeros(
    const std::vector<SpecialGramPoint>& boundaries, const EvalParams& eval, unsigned threads)
{
    if (boundaries.size() < 2) {
        return {};
    }
    std::vector<std::vector<double>> out(boundaries.size() - 1);
    parallel_for(out.size(), threads, [&](std::size_t i) {
        const auto& bottom = boundaries[i];
        const auto& top = boundaries[i + 1];
        try {
            const auto records = find_zeros(bottom.height, top.height, eval,
                                            top.gram_index - bottom.gram_index);
            auto& heights = out[i];
            heights.reserve(records.size());
            for (const auto& r : records) {
                heights.push_back(r.t);
            }
        } catch (const Error& e) {
            throw e.with_index(bottom.m);
        }
    });
    return out;
}

void check_strip(const Strip& s, const GramTable& gram)
{
    const auto fail = [&](ErrorKind kind, const std::string& what) {
        throw Error(kind, what, s.m);
    };
    if (!(s.bottom < s.top) || std::abs(s.width - (s.top - s.bottom)) > 1e-12) {
        fail(ErrorKind::NotSpecial, "inconsistent strip extent");
    }
    if (s.zeros.empty()) {
        fail(ErrorKind::EmptyStrip, "strip holds no zeros");
    }
    const long table_count = gram.count_in(s.bottom - kEdgeShift, s.top - kEdgeShift);
    if (table_count != s.gram_count) {
        std::ostringstream msg;
        msg << "Gram table counts " << table_count << " points, boundary indices give "
            << s.gram_count;
        fail(ErrorKind::CountMismatch, msg.str());
    }
    if (s.n_zeros() != s.gram_count) {
        std::ostringstream msg;
        msg << s.n_zeros() << " zeros but " << s.gram_count << " Gram points";
        fail(ErrorKind::CountMismatch, msg.str());
    }
    for (std::size_t i = 0; i < s.zeros.size(); ++i) {
        const auto& z = s.zeros[i];
        if (!(z.t >= s.bottom && z.t < s.top) || z.strip_m != s.m
            || (i > 0 && !(z.t > s.zeros[i - 1].t && z.j == s.zeros[i - 1].j + 1))) {
            fail(ErrorKind::CountMismatch, "zero records out of order or outside the strip");
        }
    }
    if (s.primary_index < 1 || s.primary_index > s.n_zeros()) {
        fail(ErrorKind::EscapedStrip, "primary index outside the strip's zeros");
    }
    const double stat = (static_cast<double>(s.primary_index) - 0.5) / static_cast<double>(s.n_zeros());
    if (std::abs(stat - s.primary_stat) > 1e-15 || !(stat > 0.0 && stat < 1.0)) {
        fail(ErrorKind::EscapedStrip, "primary statistic inconsistent");
    }
}

std::vector<Strip> assemble_strips(const std::vector<SpecialGramPoint>& boundaries,
                                   const std::vector<PrimaryZero>& primaries,
                                   const std::vector<std::vector<double>>& zeros,
                                   const GramTable& gram)
{
    if (boundaries.size() < 2 || primaries.size() + 1 != boundaries.size()
        || zeros.size() != primaries.size()) {
        throw Error(ErrorKind::DomainError, "stage outputs do not line up");
    }
    std::vector<Strip> strips;
    strips.reserve(primaries.size());
    long j = 0;
    for (std::size_t i = 0; i < primaries.size(); ++i) {
        Strip s;
        s.m = boundaries[i].m;
        s.bottom = boundaries[i].height;
        s.top = boundaries[i + 1].height;
        s.width = s.top - s.bottom;
        s.gram_count = boundaries[i + 1].gram_index - boundaries[i].gram_index;
        for (double t : zeros[i]) {
            s.zeros.push_back({++j, t, s.m});
        }

        const double target = primaries[i].zero.t;
        const auto nearest = std::min_element(
            s.zeros.begin(), s.zeros.end(), [&](const ZeroRecord& a, const ZeroRecord& b) {
                return std::abs(a.t - target) < std::abs(b.t - target);
            });
        if (nearest == s.zeros.end() || std::abs(nearest->t - target) > 1e-6) {
            std::ostringstream msg;
            msg << "primary zero at t = " << target << " not among the enumerated zeros";
            throw Error(ErrorKind::CountMismatch, msg.str(), s.m);
        }
        s.primary_index = static_cast<long>(nearest - s.zeros.begin()) + 1;
        s.primary_height = target;
        s.primary_stat = (static_cast<double>(s.primary_index) - 0.5) / static_cast<double>(s.n_zeros());
        check_strip(s, gram);
        strips.push_back(std::move(s));
    }
    return strips;
}

std::vector<Strip> build_strips(long m_max, const EvalParams& eval, const TraceParams& trace,
                                unsigned threads)
{
    if (m_max < 1) {
        throw Error(ErrorKind::DomainError, "m_max must be >= 1");
    }
    const auto boundaries = trace_boundaries(1, m_max + 1, eval, trace, threads);
    const auto primaries = trace_primaries(boundaries, eval, trace, threads);
    const auto zeros = enumerate_strip_zeros(boundaries, eval, threads);
    const GramTable gram = GramTable::up_to(boundaries.back().height + 1.0);
    return assemble_strips(boundaries, primaries, zeros, gram);
}

double zeros_per_width(const Strip& strip)
{
    if (!(strip.width > 0.0)) {
        throw Error(ErrorKind::DomainError, "strip width must be positive", strip.m);
    }
    return static_cast<double>(strip.n_zeros()) / strip.width;
}

} // namespace zetastrips
