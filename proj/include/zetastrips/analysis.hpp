#pragma once

#include "zetastrips/strips.hpp"

#include <array>
#include <span>
#include <vector>

namespace zetastrips {

/// Ordinary least squares y = intercept + slope x with homoskedastic
/// standard errors.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
    long n = 0;

    double operator()(double x) const noexcept { return intercept + slope * x; }
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

enum class DeviationKind { BottomDev, DensityDev };

struct DeviationRecord {
    long m = 0;
    double value = 0.0;
};

struct DeviationSeries {
    DeviationKind kind = DeviationKind::BottomDev;
    std::vector<DeviationRecord> records;
};

/// Arch centre t = 2^{1+p/q} pi, i.e. strip number 2^{p/q} ln 2.
struct ArchPrediction {
    int p = 0;
    int q = 0;
    double m_center = 0.0;
    double t_center = 0.0;
};

/// Bottom heights against strip number (at least 100 strips).
LinearFit fit_bottoms(std::span<const Strip> strips);
/// Top heights against strip number.
LinearFit fit_tops(std::span<const Strip> strips);

/// bottom(m) - 2 m pi / ln 2
DeviationSeries bottom_deviation_series(std::span<const Strip> strips);

/// Variance of the series over consecutive windows of `width` records.
std::vector<double> windowed_variance(const DeviationSeries& series, std::size_t width);

/// Coprime (p, q) with q <= q_max, p/q <= p_max and 1 <= m_center <= m_range,
/// sorted by m_center.
std::vector<ArchPrediction> arch_centers(int p_max, int q_max, double m_range);

struct Resonance {
    int p = 0;
    double t = 0.0;        // 2 pi 2^p
    double m_center = 0.0; // t ln 2 / 2 pi
    /// False when the centre lies before the top of the first strip or past m_range.
    bool in_range = false;
};

/// Height where the strip height spans exactly p Gram gaps.
Resonance resonance_check(int p, double m_range);

struct DensityFit {
    /// zeros / width against ln m
    LinearFit vs_log_m;
    /// zeros / width against m
    LinearFit vs_m;
    /// residuals of the ln m fit
    DeviationSeries residuals;
};

DensityFit fit_density(std::span<const Strip> strips);

struct PrimaryStats {
    double mean = 0.0;
    double variance = 0.0;
    std::array<double, 4> quartile_variance{};
    long n = 0;
};

/// Mean and (sample) variance of primary_stat overall and per index quartile.
PrimaryStats primary_stats(std::span<const Strip> strips);

/// Branch separation around one arch centre. Bottoms are Gram points, so
/// near alpha(p, q) the bottom deviations fall on levels spaced by about one
/// q-th of the local Gram gap. Deviations of the strips within the window are
/// clustered (a break wherever sorted values jump by more than
/// `cluster_gap` Gram gaps) and the median spacing of adjacent levels is
/// reported in units of gap_model(t_center).
struct BranchSpacing {
    ArchPrediction arch;
    long strips = 0;
    long levels = 0;
    double level_gap = 0.0;
};

/// Arches whose window holds fewer than three strips, or that yield a single
/// level, are skipped.
std::vector<BranchSpacing> arch_branch_spacing(std::span<const Strip> strips,
                                               std::span<const ArchPrediction> arches,
                                               double relative_window = 0.02,
                                               double cluster_gap = 0.15);

} // namespace zetastrips
