#pragma once

#include <complex>
#include <optional>

namespace zetastrips {

using Complex = std::complex<double>;

/// Evaluation window: -2 <= sigma <= 8, |t| <= 1.1e4.
inline constexpr double kWindowSigmaMin = -2.0;
inline constexpr double kWindowSigmaMax = 8.0;
inline constexpr double kWindowTMax = 1.1e4;

/// s = sigma + i t
struct ComplexPoint {
    double sigma = 0.0;
    double t = 0.0;

    Complex s() const noexcept { return {sigma, t}; }
    bool in_window() const noexcept;
};

struct EvalParams {
    /// Floor on the Euler-Maclaurin cutoff: N >= ceil(factor * |t| / 2pi) + 10.
    double em_terms_factor = 1.3;
    /// Number of Bernoulli correction terms K.
    int bernoulli_order = 20;
    /// Error target: absolute while |zeta| <= 1, relative above. N grows past the
    /// floor until the truncation bound meets it.
    double target_abs_error = 1e-12;

    /// Throws Error(InvalidConfig) when a field is outside its admissible range.
    void validate() const;
};

struct ZetaValue {
    Complex value;
    std::optional<Complex> derivative;
    double est_error = 0.0;
    /// Euler-Maclaurin cutoff actually used.
    long terms = 0;
};

/// zeta(s) by Euler-Maclaurin summation, optionally with zeta'(s).
///
/// The cutoff starts at the floor implied by `params.em_terms_factor` and is
/// enlarged until the analytic tail bound drops below
/// `params.target_abs_error`. Throws PoleProximity within 1e-6 of s = 1,
/// WindowExceeded outside the window and PrecisionLoss if no admissible
/// cutoff meets the target.
ZetaValue zeta(ComplexPoint s, const EvalParams& params, bool with_derivative = false);

/// Riemann-Siegel theta via its five-term asymptotic expansion (t >= 7).
double rs_theta(double t);

/// d/dt of rs_theta.
double rs_theta_prime(double t);

/// Hardy's Z(t) = exp(i theta_RS(t)) zeta(1/2 + i t); real for real t >= 7.
double hardy_z(double t, const EvalParams& params);

} // namespace zetastrips
