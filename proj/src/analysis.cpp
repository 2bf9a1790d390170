#include "zetastrips/analysis.hpp"

#include "zetastrips/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace zetastrips {

namespace {

using std::numbers::ln2;
using std::numbers::pi;

constexpr std::size_t kMinStrips = 100;

void require_strips(std::span<const Strip> strips, const char* what)
{
    if (strips.size() < kMinStrips) {
        throw Error(ErrorKind::DomainError, std::string(what) + " needs at least 100 strips");
    }
}

double strip_height()
{
    return 2.0 * pi / ln2;
}

LinearFit fit_edges(std::span<const Strip> strips, bool tops)
{
    std::vector<double> x, y;
    x.reserve(strips.size());
    y.reserve(strips.size());
    for (const auto& s : strips) {
        x.push_back(static_cast<double>(s.m));
        y.push_back(tops ? s.top : s.bottom);
    }
    return least_squares(x, y);
}

double sample_variance(std::span<const double> v)
{
    if (v.size() < 2) {
        return 0.0;
    }
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return ss / static_cast<double>(v.size() - 1);
}

} // namespace

LinearFit least_squares(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 3) {
        throw Error(ErrorKind::DomainError, "least squares needs >= 3 paired samples");
    }
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw Error(ErrorKind::DomainError, "least squares needs distinct abscissae");
    }

    LinearFit fit;
    fit.n = static_cast<long>(x.size());
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - fit(x[i]);
        rss += r * r;
    }
    const double s2 = rss / (n - 2.0);
    fit.slope_se = std::sqrt(s2 / sxx);
    fit.intercept_se = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    return fit;
}

LinearFit fit_bottoms(std::span<const Strip> strips)
{
    require_strips(strips, "fit_bottoms");
    return fit_edges(strips, false);
}

LinearFit fit_tops(std::span<const Strip> strips)
{
    require_strips(strips, "fit_tops");
    return fit_edges(strips, true);
}

DeviationSeries bottom_deviation_series(std::span<const Strip> strips)
{
    if (strips.empty()) {
        throw Error(ErrorKind::DomainError, "bottom_deviation_series on no strips");
    }
    DeviationSeries out{DeviationKind::BottomDev, {}};
    out.records.reserve(strips.size());
    for (const auto& s : strips) {
        out.records.push_back({s.m, s.bottom - static_cast<double>(s.m) * strip_height()});
    }
    return out;
}

std::vector<double> windowed_variance(const DeviationSeries& series, std::size_t width)
{
    std::vector<double> out;
    if (width < 2) {
        return out;
    }
    std::vector<double> window;
    for (std::size_t start = 0; start + width <= series.records.size(); start += width) {
        window.clear();
        for (std::size_t i = start; i < start + width; ++i) {
            window.push_back(series.records[i].value);
        }
        out.push_back(sample_variance(window));
    }
    return out;
}

std::vector<ArchPrediction> arch_centers(int p_max, int q_max, double m_range)
{
    if (p_max < 4 || q_max < 1) {
        throw Error(ErrorKind::DomainError, "arch_centers needs p_max >= 4 and q_max >= 1");
    }
    std::vector<ArchPrediction> out;
    for (int q = 1; q <= q_max; ++q) {
        for (int p = 1; p <= p_max * q; ++p) {
            if (std::gcd(p, q) != 1) {
                continue;
            }
            const double exponent = static_cast<double>(p) / static_cast<double>(q);
            const double m_center = std::exp2(exponent) * ln2;
            if (m_center < 1.0 || m_center > m_range) {
                continue;
            }
            out.push_back({p, q, m_center, std::exp2(1.0 + exponent) * pi});
        }
    }
    std::sort(out.begin(), out.end(), [](const ArchPrediction& a, const ArchPrediction& b) {
        return a.m_center < b.m_center;
    });
    return out;
}

Resonance resonance_check(int p, double m_range)
{
    if (p < 1) {
        throw Error(ErrorKind::DomainError, "resonance order must be >= 1");
    }
    // (2 pi / ln 2) / gap_model(t) = p  <=>  ln(t / 2 pi) = p ln 2
    Resonance r;
    r.p = p;
    r.t = 2.0 * pi * std::exp2(static_cast<double>(p));
    r.m_center = r.t / strip_height();
    r.in_range = r.m_center >= 2.0 && r.m_center <= m_range;
    return r;
}

DensityFit fit_density(std::span<const Strip> strips)
{
    require_strips(strips, "fit_density");
    std::vector<double> m, log_m, density;
    for (const auto& s : strips) {
        m.push_back(static_cast<double>(s.m));
        log_m.push_back(std::log(static_cast<double>(s.m)));
        density.push_back(zeros_per_width(s));
    }
    DensityFit out;
    out.vs_log_m = least_squares(log_m, density);
    out.vs_m = least_squares(m, density);
    out.residuals.kind = DeviationKind::DensityDev;
    for (std::size_t i = 0; i < strips.size(); ++i) {
        out.residuals.records.push_back({strips[i].m, density[i] - out.vs_log_m(log_m[i])});
    }
    return out;
}

PrimaryStats primary_stats(std::span<const Strip> strips)
{
    require_strips(strips, "primary_stats");
    std::vector<double> stat;
    stat.reserve(strips.size());
    for (const auto& s : strips) {
        stat.push_back(s.primary_stat);
    }
    PrimaryStats out;
    out.n = static_cast<long>(stat.size());
    out.mean = std::accumulate(stat.begin(), stat.end(), 0.0) / static_cast<double>(stat.size());
    out.variance = sample_variance(stat);
    for (std::size_t q = 0; q < 4; ++q) {
        const std::size_t lo = q * stat.size() / 4;
        const std::size_t hi = (q + 1) * stat.size() / 4;
        out.quartile_variance[q] = sample_variance(std::span(stat).subspan(lo, hi - lo));
    }
    return out;
}

std::vector<BranchSpacing> arch_branch_spacing(std::span<const Strip> strips,
                                               std::span<const ArchPrediction> arches,
                                               double relative_window, double cluster_gap)
{
    std::vector<BranchSpacing> out;
    if (strips.empty()) {
        return out;
    }
    const auto deviations = bottom_deviation_series(strips);
    std::vector<double> values, centers, gaps;
    for (const auto& arch : arches) {
        const double half = std::max(3.0, relative_window * arch.m_center);
        values.clear();
        for (std::size_t i = 0; i < strips.size(); ++i) {
            if (std::abs(static_cast<double>(strips[i].m) - arch.m_center) <= half) {
                values.push_back(deviations.records[i].value);
            }
        }
        if (values.size() < 3) {
            continue;
        }
        std::sort(values.begin(), values.end());
        const double gram_gap = gap_model(arch.t_center);

        centers.clear();
        double sum = values[0];
        int count = 1;
        for (std::size_t i = 1; i < values.size(); ++i) {
            if (values[i] - values[i - 1] > cluster_gap * gram_gap) {
                centers.push_back(sum / count);
                sum = 0.0;
                count = 0;
            }
            sum += values[i];
            ++count;
        }
        centers.push_back(sum / count);
        if (centers.size() < 2) {
            continue;
        }

        gaps.clear();
        for (std::size_t i = 1; i < centers.size(); ++i) {
            gaps.push_back((centers[i] - centers[i - 1]) / gram_gap);
        }
        std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());

        BranchSpacing b;
        b.arch = arch;
        b.strips = static_cast<long>(values.size());
        b.levels = static_cast<long>(centers.size());
        b.level_gap = gaps[gaps.size() / 2];
        out.push_back(b);
    }
    return out;
}

} // namespace zetastrips
