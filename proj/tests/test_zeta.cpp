#include "zetastrips/error.hpp"
#include "zetastrips/zeta.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace zetastrips;
using std::numbers::pi;

namespace {

// Plain partial sum of n^{-s}, smallest terms first, in long double.
Complex direct_sum(ComplexPoint s, long terms)
{
    long double re = 0.0L, im = 0.0L;
    for (long n = terms; n >= 1; --n) {
        const long double ln = std::log(static_cast<long double>(n));
        const long double mag = std::exp(-s.sigma * ln);
        const long double ang = s.t * ln;
        re += mag * std::cos(ang);
        im -= mag * std::sin(ang);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

const EvalParams params;

} // namespace

TEST_CASE("zeta at closed-form points")
{
    CHECK(zeta({2.0, 0.0}, params).value.real() == doctest::Approx(pi * pi / 6.0).epsilon(1e-14));
    CHECK(std::abs(zeta({2.0, 0.0}, params).value.imag()) < 1e-15);
    CHECK(std::abs(zeta({0.0, 0.0}, params).value - Complex(-0.5, 0.0)) < 1e-12);
    CHECK(std::abs(zeta({4.0, 0.0}, params).value.real() - std::pow(pi, 4) / 90.0) < 1e-13);
    CHECK(std::abs(zeta({-1.0, 0.0}, params).value.real() + 1.0 / 12.0) < 1e-12);
}

TEST_CASE("zeta matches direct summation where the series converges")
{
    const ComplexPoint s{6.0, 50.0};
    CHECK(std::abs(zeta(s, params).value - direct_sum(s, 100'000)) < 1e-10);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> sigma(3.0, 8.0);
    std::uniform_real_distribution<double> height(-1e4, 1e4);
    for (int i = 0; i < 4; ++i) {
        const ComplexPoint p{sigma(rng), height(rng)};
        CAPTURE(p.sigma);
        CAPTURE(p.t);
        CHECK(std::abs(zeta(p, params).value - direct_sum(p, 1'000'000)) < 1e-10);
    }
}

TEST_CASE("zeta tends to one for large sigma")
{
    CHECK(std::abs(zeta({8.0, 100.0}, params).value - 1.0) < std::pow(2.0, -8) * 1.1);
    for (double t : {10.0, 333.3, 2718.0, 9999.0}) {
        const Complex s{8.0, t};
        const Complex two_terms = 1.0 + std::pow(Complex(2.0), -s);
        CHECK(std::abs(zeta({8.0, t}, params).value - two_terms) < 2.0 * std::pow(3.0, -8));
    }
}

TEST_CASE("zeta conjugate symmetry")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> sigma(kWindowSigmaMin, kWindowSigmaMax);
    std::uniform_real_distribution<double> height(0.0, kWindowTMax);
    for (int i = 0; i < 100; ++i) {
        const ComplexPoint s{sigma(rng), height(rng)};
        const Complex a = zeta({s.sigma, -s.t}, params).value;
        const Complex b = std::conj(zeta(s, params).value);
        CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("zeta derivative agrees with central differences")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> sigma(-1.0, 6.0);
    std::uniform_real_distribution<double> height(7.0, 1e4);
    constexpr double h = 1e-6;
    for (int i = 0; i < 50; ++i) {
        const ComplexPoint s{sigma(rng), height(rng)};
        const auto v = zeta(s, params, true);
        REQUIRE(v.derivative.has_value());
        const Complex fd =
            (zeta({s.sigma + h, s.t}, params).value - zeta({s.sigma - h, s.t}, params).value)
            / (2.0 * h);
        CAPTURE(s.sigma);
        CAPTURE(s.t);
        CHECK(std::abs(*v.derivative - fd) < 1e-6 * std::max(1.0, std::abs(*v.derivative)));
    }
}

TEST_CASE("zeta error estimate stays within target")
{
    const auto v = zeta({0.5, 9876.5}, params);
    CHECK(v.est_error <= params.target_abs_error);
    CHECK(v.terms > 0);
}

TEST_CASE("zeta rejects the pole and points outside the window")
{
    auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        FAIL("no error raised");
        return ErrorKind::Io;
    };
    CHECK(kind_of([] { zeta({1.0, 0.0}, params); }) == ErrorKind::PoleProximity);
    CHECK(kind_of([] { zeta({1.0 + 1e-7, 1e-7}, params); }) == ErrorKind::PoleProximity);
    CHECK(kind_of([] { zeta({9.0, 10.0}, params); }) == ErrorKind::WindowExceeded);
    CHECK(kind_of([] { zeta({0.5, 2e4}, params); }) == ErrorKind::WindowExceeded);
    CHECK(kind_of([] { zeta({-3.0, 10.0}, params); }) == ErrorKind::WindowExceeded);
    CHECK_NOTHROW(zeta({1.0 + 1e-5, 0.0}, params));
}

TEST_CASE("EvalParams validation")
{
    EvalParams p;
    CHECK_NOTHROW(p.validate());
    p.target_abs_error = 1e-3;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.bernoulli_order = 2;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.em_terms_factor = 1.0;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("rs_theta values and monotonicity")
{
    const double t = 2.0 * pi * std::numbers::e;
    CHECK(rs_theta(t) < 0.0);
    CHECK(rs_theta_prime(t) > 0.0);
    CHECK(std::abs(rs_theta(9.6669080561) + pi) < 1e-6);
    CHECK(std::abs(rs_theta(17.8455995) ) < 1e-6);
    double prev = rs_theta(7.0);
    for (double x = 7.1; x < 200.0; x += 0.1) {
        const double cur = rs_theta(x);
        CHECK(cur > prev);
        prev = cur;
    }
    const double fd = (rs_theta(1000.0 + 1e-5) - rs_theta(1000.0 - 1e-5)) / 2e-5;
    CHECK(std::abs(fd - rs_theta_prime(1000.0)) < 1e-7);
    CHECK_THROWS_AS(rs_theta(6.9), Error);
    CHECK_THROWS_AS(rs_theta_prime(1.0), Error);
}

TEST_CASE("hardy_z examples")
{
    CHECK(std::abs(hardy_z(14.134725, params)) < 1e-5);
    const double z = hardy_z(17.8455995, params);
    CHECK(z > 0.0);
    CHECK(std::abs(zeta({0.5, 17.8455995}, params).value.real() - z) < 1e-6);
    // |Z| = |zeta| and the sign follows the theta rotation
    const Complex v = zeta({0.5, 20.0}, params).value;
    const double z20 = hardy_z(20.0, params);
    CHECK(std::abs(std::abs(z20) - std::abs(v)) < 1e-10);
    const Complex rotated = std::polar(1.0, rs_theta(20.0)) * v;
    CHECK(std::signbit(z20) == std::signbit(rotated.real()));
    CHECK_THROWS_AS(hardy_z(5.0, params), Error);
}

TEST_CASE("hardy_z changes sign between consecutive known zeros")
{
    const double zeros[] = {14.134725142, 21.022039639, 25.010857580, 30.424876126,
                            32.935061588, 37.586178159, 40.918719012, 43.327073281};
    for (std::size_t i = 0; i + 1 < std::size(zeros); ++i) {
        const double mid = 0.5 * (zeros[i] + zeros[i + 1]);
        const double next_mid =
            i + 2 < std::size(zeros) ? 0.5 * (zeros[i + 1] + zeros[i + 2]) : zeros[i + 1] + 0.5;
        CHECK(hardy_z(mid, params) * hardy_z(next_mid, params) < 0.0);
        CHECK(std::abs(hardy_z(zeros[i], params)) < 1e-8);
    }
}
