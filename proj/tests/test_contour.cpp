#include "zetastrips/contour.hpp"
#include "zetastrips/error.hpp"
#include "zetastrips/gram.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace zetastrips;
using std::numbers::ln2;
using std::numbers::pi;

namespace {

const EvalParams eval;
const TraceParams params;

ContourPath leftward(long k)
{
    return trace(launch_point(k, eval, params), Direction::Leftward, eval, params, k);
}

} // namespace

TEST_CASE("launch_point examples")
{
    // the neglected 3^-s term moves the root by at most (2/3)^sigma / ln 2
    const double drift = std::pow(2.0 / 3.0, 5.0) / ln2;
    const ComplexPoint p2 = launch_point(2, eval, params);
    CHECK(p2.sigma == 5.0);
    CHECK(std::abs(p2.t - 2.0 * pi / ln2) < drift);
    CHECK(std::abs(zeta(p2, eval).value.imag()) < params.newton_tol);
    CHECK(zeta(p2, eval).value.real() > 0.0);

    const ComplexPoint p3 = launch_point(3, eval, params);
    CHECK(std::abs(p3.t - 3.0 * pi / ln2) < drift);
    CHECK(std::abs(p3.t - 13.597) < 0.2);

    const ComplexPoint far = launch_point(2204, eval, params);
    CHECK(std::abs(far.t - 2204.0 * pi / ln2) < 0.5 * pi / ln2);
    CHECK(std::abs(far.t - 9989.3) < 0.5);
    CHECK_THROWS_AS(launch_point(0, eval, params), Error);
}

TEST_CASE("boundary contour of strip 1 crosses the line at the first Gram point")
{
    const ContourPath path = leftward(2);
    REQUIRE(path.crossing_t.has_value());
    CHECK(std::abs(*path.crossing_t - 9.6669080561) < 1e-6);
    CHECK(path.terminal == Terminal::ReachedSigmaMin);
    CHECK(path.min_abs_zeta > params.zero_radius);
}

TEST_CASE("odd launch contour 3 ends at the first zero")
{
    const ContourPath path = leftward(3);
    CHECK(path.terminal == Terminal::TerminatedAtZero);
    REQUIRE(path.zero.has_value());
    CHECK(std::abs(path.zero->sigma - 0.5) < 1e-8);
    CHECK(std::abs(path.zero->t - 14.134725142) < 1e-8);
}

TEST_CASE("rightward trace runs monotonically to the window edge")
{
    const ContourPath path =
        trace(launch_point(5, eval, params), Direction::Rightward, eval, params, 5);
    CHECK(path.terminal == Terminal::ReachedSigmaMax);
    for (std::size_t i = 1; i < path.points.size(); ++i) {
        CHECK(path.points[i].sigma > path.points[i - 1].sigma);
    }
    CHECK(path.points.back().sigma >= params.sigma_max - 1e-6);
}

TEST_CASE("trace refuses a start off the level curve")
{
    CHECK_THROWS_AS(trace({5.0, 10.0}, Direction::Leftward, eval, params), Error);
}

TEST_CASE("path points stay on Im zeta = 0 and follow the tangent")
{
    for (long k : {2L, 7L, 40L, 1001L}) {
        const ContourPath path = leftward(k);
        REQUIRE(path.points.size() == path.values.size());
        REQUIRE(path.points.size() > 10);
        for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
            const Complex v = path.values[i];
            CHECK(std::abs(v.imag()) <= params.newton_tol * std::max(1.0, std::abs(v)));
            // chord between accepted points is nearly perpendicular to grad Im zeta
            const ComplexPoint a = path.points[i];
            const ComplexPoint b = path.points[i + 1];
            const Complex d = *zeta(a, eval, true).derivative;
            const double gs = d.imag(), gt = d.real();
            const double ds = b.sigma - a.sigma, dt = b.t - a.t;
            const double chord = std::hypot(ds, dt);
            if (chord > 0.0) {
                CHECK(std::abs(gs * ds + gt * dt) < 0.05 * std::hypot(gs, gt) * chord);
            }
        }
    }
}

TEST_CASE("Cauchy-Riemann consistency along a path")
{
    const ContourPath path = leftward(12);
    constexpr double h = 1e-6;
    for (std::size_t i = 0; i < path.points.size(); i += 7) {
        const ComplexPoint p = path.points[i];
        const double fd = (zeta({p.sigma + h, p.t}, eval).value.imag()
                           - zeta({p.sigma - h, p.t}, eval).value.imag())
                          / (2.0 * h);
        const double analytic = zeta(p, eval, true).derivative->imag();
        CHECK(std::abs(fd - analytic) < 1e-5 * std::max(1.0, std::abs(analytic)));
    }
}

TEST_CASE("unwrap_phase along boundary and primary paths")
{
    const ContourPath boundary = leftward(2);
    const auto phase = unwrap_phase(boundary);
    REQUIRE(phase.size() == boundary.points.size());
    CHECK(std::abs(phase.front().theta) < 2.0 * std::pow(2.0, -params.sigma_start));
    for (const auto& s : phase) {
        const double r = std::remainder(s.theta, 2.0 * pi);
        CHECK(std::abs(r) < 1e-6);
    }

    ContourPath primary = leftward(3);
    // drop the approach to the terminal zero
    while (!primary.values.empty() && std::abs(primary.values.back()) < params.zero_radius) {
        primary.values.pop_back();
        primary.points.pop_back();
    }
    for (const auto& s : unwrap_phase(primary)) {
        CHECK(std::abs(std::remainder(s.theta, 2.0 * pi)) < 1e-6);
    }

    CHECK_THROWS_AS(unwrap_phase(ContourPath{}), Error);

    ContourPath jumpy;
    jumpy.points = {{5.0, 1.0}, {5.0, 1.1}};
    jumpy.values = {Complex(1.0, 0.0), Complex(-1.0, 0.0)};
    try {
        unwrap_phase(jumpy);
        FAIL("expected PhaseJump");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PhaseJump);
    }
}

TEST_CASE("special_gram_point examples")
{
    const auto first = special_gram_point(1, eval, params);
    CHECK(std::abs(first.height - 9.6669080561) < 1e-6);
    CHECK(first.gram_index == -1);

    const auto second = special_gram_point(2, eval, params);
    CHECK(second.height > 9.667);
    CHECK(second.height < 27.2);
    CHECK(std::abs(second.height - gram_point(second.gram_index).height) < 1e-6);
    const double dev = second.height - 2.0 * 2.0 * pi / ln2;
    CHECK(dev > -2.0);
    CHECK(dev < 2.0);

    const auto last = special_gram_point(1102, eval, params);
    CHECK(std::abs(last.height - 9989.0) < 3.0);
    const double last_dev = last.height - 1102.0 * 2.0 * pi / ln2;
    CHECK(last_dev > -2.0);
    CHECK(last_dev < 2.0);
    CHECK(std::abs(last.height - gram_point(last.gram_index).height) < 1e-6);
    CHECK_THROWS_AS(special_gram_point(0, eval, params), Error);
}

TEST_CASE("consecutive boundaries are ordered and sit on Gram points")
{
    double prev = 0.0;
    for (long m = 1; m <= 40; ++m) {
        const auto b = special_gram_point(m, eval, params);
        CHECK(b.height > prev);
        CHECK(std::abs(b.height - gram_point(b.gram_index).height) < 1e-6);
        prev = b.height;
    }
}

TEST_CASE("primary_zero_of_strip examples")
{
    const auto z1 = primary_zero_of_strip(1, eval, params);
    CHECK(std::abs(z1.zero.sigma - 0.5) < 1e-6);
    CHECK(std::abs(z1.zero.t - 14.134725) < 1e-5);

    const double lo = special_gram_point(2, eval, params).height;
    const double hi = special_gram_point(3, eval, params).height;
    const auto z2 = primary_zero_of_strip(2, eval, params, std::pair{lo, hi});
    CHECK(z2.zero.t > lo);
    CHECK(z2.zero.t < hi);
    CHECK(std::abs(z2.zero.sigma - 0.5) < 1e-6);

    // wrong bounds are reported as an escape
    try {
        primary_zero_of_strip(2, eval, params, std::pair{hi, hi + 5.0});
        FAIL("expected EscapedStrip");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EscapedStrip);
        CHECK(e.index() == 2);
    }
}

TEST_CASE("TraceParams validation")
{
    TraceParams p;
    CHECK_NOTHROW(p.validate());
    p.step = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.sigma_min = 0.7;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.max_steps = 0;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("max_steps exhaustion aborts instead of throwing")
{
    TraceParams p;
    p.max_steps = 3;
    const ContourPath path = trace(launch_point(4, eval, p), Direction::Leftward, eval, p, 4);
    CHECK(path.terminal == Terminal::Aborted);
    REQUIRE(path.abort_kind.has_value());
    CHECK(*path.abort_kind == ErrorKind::MaxSteps);
}
