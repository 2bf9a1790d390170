#include "zetastrips/analysis.hpp"
#include "zetastrips/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace zetastrips;
using std::numbers::ln2;
using std::numbers::pi;

namespace {

constexpr double kStripHeight = 2.0 * pi / ln2;

Strip make_strip(long m, double bottom, double width, long zeros, long primary_index)
{
    Strip s;
    s.m = m;
    s.bottom = bottom;
    s.top = bottom + width;
    s.width = width;
    s.gram_count = zeros;
    for (long i = 0; i < zeros; ++i) {
        s.zeros.push_back({i + 1, bottom + width * (i + 0.5) / zeros, m});
    }
    s.primary_index = primary_index;
    s.primary_height = s.zeros[primary_index - 1].t;
    s.primary_stat = (primary_index - 0.5) / static_cast<double>(zeros);
    return s;
}

// Strips that follow the smooth model exactly: bottoms on the launch line,
// zero density 1 / gap_model(t) at t = 2 m pi / ln 2.
std::vector<Strip> model_strips(long count)
{
    std::vector<Strip> out;
    for (long m = 1; m <= count; ++m) {
        const double density = std::log(m * kStripHeight / (2.0 * pi)) / (2.0 * pi);
        const long zeros = 1 + m % 5;
        out.push_back(make_strip(m, m * kStripHeight, zeros / density, zeros, 1 + (m % zeros)));
    }
    return out;
}

} // namespace

TEST_CASE("least squares on an exact line")
{
    std::vector<double> x, y;
    for (int m = 1; m <= 200; ++m) {
        x.push_back(m);
        y.push_back(9.06472028 * m);
    }
    const LinearFit fit = least_squares(x, y);
    CHECK(fit.slope == doctest::Approx(9.06472028).epsilon(1e-13));
    CHECK(std::abs(fit.intercept) < 1e-10);
    CHECK(fit.slope_se < 1e-12);
    CHECK(fit.intercept_se < 1e-10);
    CHECK(fit.n == 200);
    CHECK(fit(10.0) == doctest::Approx(90.6472028));
}

TEST_CASE("least squares standard errors")
{
    // y = 1 + 2x + e with e = +-1 alternating: slope se has a closed form
    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) {
        x.push_back(i);
        y.push_back(1.0 + 2.0 * i + (i % 2 ? 1.0 : -1.0));
    }
    const LinearFit fit = least_squares(x, y);
    double sxx = 0.0, ssr = 0.0;
    for (int i = 0; i < 10; ++i) {
        sxx += (i - 4.5) * (i - 4.5);
    }
    for (int i = 0; i < 10; ++i) {
        const double r = y[i] - fit(x[i]);
        ssr += r * r;
    }
    const double s2 = ssr / 8.0;
    CHECK(fit.slope_se == doctest::Approx(std::sqrt(s2 / sxx)));
    CHECK(fit.intercept_se == doctest::Approx(std::sqrt(s2 * (0.1 + 4.5 * 4.5 / sxx))));
    CHECK_THROWS_AS(least_squares(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
    CHECK_THROWS_AS(least_squares(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
                    Error);
}

TEST_CASE("fit_bottoms and fit_tops on model strips")
{
    const auto strips = model_strips(150);
    const LinearFit bottoms = fit_bottoms(strips);
    CHECK(bottoms.slope == doctest::Approx(kStripHeight).epsilon(1e-12));
    CHECK(std::abs(bottoms.intercept) < 1e-9);
    const std::vector<Strip> few(strips.begin(), strips.begin() + 99);
    CHECK_THROWS_AS(fit_bottoms(few), Error);
    CHECK_THROWS_AS(fit_tops(few), Error);
}

TEST_CASE("bottom deviation series")
{
    Strip s = make_strip(1, 9.6669080561, 8.0, 1, 1);
    const auto dev = bottom_deviation_series(std::span(&s, 1));
    CHECK(dev.kind == DeviationKind::BottomDev);
    REQUIRE(dev.records.size() == 1);
    CHECK(std::abs(dev.records[0].value - 0.6022) < 1e-4);
    CHECK_THROWS_AS(bottom_deviation_series({}), Error);
}

TEST_CASE("windowed variance")
{
    DeviationSeries series;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> noise(0.0, 0.5);
    for (long m = 1; m <= 640; ++m) {
        series.records.push_back({m, noise(rng)});
    }
    const auto v = windowed_variance(series, 64);
    REQUIRE(v.size() == 10);
    for (double x : v) {
        CHECK(x > 0.25 / 3.0);
        CHECK(x < 0.25 * 3.0);
    }
    CHECK(windowed_variance(series, 1).empty());
}

TEST_CASE("arch centers")
{
    const auto arches = arch_centers(10, 4, 1102.0);
    REQUIRE(!arches.empty());
    for (std::size_t i = 0; i < arches.size(); ++i) {
        const auto& a = arches[i];
        CHECK(std::gcd(a.p, a.q) == 1);
        CHECK(a.q <= 4);
        CHECK(a.m_center >= 1.0);
        CHECK(a.m_center <= 1102.0);
        CHECK(std::abs(a.t_center / a.m_center - kStripHeight) < 1e-9);
        if (i > 0) {
            CHECK(a.m_center >= arches[i - 1].m_center);
        }
    }
    auto find = [&](int p, int q) {
        for (const auto& a : arches) {
            if (a.p == p && a.q == q) {
                return a;
            }
        }
        FAIL("missing arch");
        return ArchPrediction{};
    };
    CHECK(std::abs(find(4, 1).m_center - 11.0904) < 1e-4);
    CHECK(std::abs(find(4, 1).t_center - 100.531) < 1e-3);
    CHECK(std::abs(find(10, 1).m_center - 709.78) < 1e-2);
    const double expected[] = {11.09, 22.18, 44.36, 88.72, 177.4, 354.9, 709.8};
    for (int p = 4; p <= 10; ++p) {
        const double rel = std::abs(find(p, 1).m_center - expected[p - 4]) / expected[p - 4];
        CHECK(rel < 1e-3);
    }
    CHECK_THROWS_AS(arch_centers(3, 1, 100.0), Error);
    CHECK_THROWS_AS(arch_centers(4, 0, 100.0), Error);
}

TEST_CASE("resonance check")
{
    const auto arches = arch_centers(10, 1, 1102.0);
    for (int p = 4; p <= 10; ++p) {
        const Resonance r = resonance_check(p, 1102.0);
        CHECK(r.in_range);
        CHECK(std::abs(r.t - arches[p - 1].t_center) < 1e-9 * r.t);
        // strip height over the Gram spacing at t equals p
        CHECK(std::abs(kStripHeight / gap_model(r.t) - p) < 1e-12);
    }
    CHECK(std::abs(resonance_check(4, 1102.0).t - 100.531) < 1e-3);
    CHECK(std::abs(resonance_check(10, 1102.0).t - 6433.98) < 1e-2);
    const Resonance low = resonance_check(1, 1102.0);
    CHECK(low.t == doctest::Approx(4.0 * pi));
    CHECK_FALSE(low.in_range);
    CHECK_FALSE(resonance_check(11, 1102.0).in_range);
    CHECK_THROWS_AS(resonance_check(0, 1102.0), Error);
}

TEST_CASE("density fit recovers the smooth model")
{
    const auto strips = model_strips(300);
    const DensityFit fit = fit_density(strips);
    CHECK(fit.residuals.kind == DeviationKind::DensityDev);
    REQUIRE(fit.residuals.records.size() == 300);
    for (const auto& r : fit.residuals.records) {
        CHECK(std::abs(r.value) < 1e-9);
    }
    CHECK(fit.vs_log_m.slope == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-10));
}

TEST_CASE("primary statistics")
{
    std::vector<Strip> single;
    for (long m = 1; m <= 120; ++m) {
        single.push_back(make_strip(m, m * kStripHeight, kStripHeight, 1, 1));
    }
    const PrimaryStats flat = primary_stats(single);
    CHECK(flat.mean == 0.5);
    CHECK(flat.variance == 0.0);
    for (double q : flat.quartile_variance) {
        CHECK(q == 0.0);
    }
    CHECK(flat.n == 120);

    // two zeros, alternating primary index: stats 0.25 and 0.75
    std::vector<Strip> mixed;
    for (long m = 1; m <= 120; ++m) {
        mixed.push_back(make_strip(m, m * kStripHeight, kStripHeight, 2, 1 + m % 2));
    }
    const PrimaryStats ps = primary_stats(mixed);
    CHECK(ps.mean == doctest::Approx(0.5));
    CHECK(ps.variance == doctest::Approx(0.0625 * 120.0 / 119.0));
    CHECK_THROWS_AS(primary_stats(std::span(mixed).first(50)), Error);
}

TEST_CASE("branch spacing resolves deviation levels")
{
    // bottoms on a lattice of spacing F/q around the arch: levels F/q apart
    const double m_center = 300.0;
    const double t_center = m_center * kStripHeight;
    const double gram_gap = gap_model(t_center);
    for (int q : {1, 2, 3}) {
        std::vector<Strip> strips;
        for (long m = 1; m <= 400; ++m) {
            const double dev = static_cast<double>(m % (q + 1)) * gram_gap / q;
            strips.push_back(make_strip(m, m * kStripHeight + dev, kStripHeight, 3, 1));
        }
        const std::vector<ArchPrediction> arch{{8, q, m_center, t_center}};
        const auto spacing = arch_branch_spacing(strips, arch);
        REQUIRE(spacing.size() == 1);
        CHECK(spacing[0].levels == q + 1);
        CHECK(spacing[0].strips == 13);
        CHECK(spacing[0].level_gap == doctest::Approx(1.0 / q));
    }
    // a flat series has one level and is skipped
    std::vector<Strip> flat;
    for (long m = 1; m <= 400; ++m) {
        flat.push_back(make_strip(m, m * kStripHeight, kStripHeight, 3, 1));
    }
    const std::vector<ArchPrediction> arch{{8, 1, m_center, t_center}};
    CHECK(arch_branch_spacing(flat, arch).empty());
}
