#include "zetastrips/zeta.hpp"

#include "zetastrips/error.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace zetastrips {

namespace {

constexpr int kMaxBernoulliOrder = 20;
constexpr long kMaxTerms = 200000;
constexpr double kPoleRadius = 1e-6;

// B_{2k} / (2k)!, k = 0 .. kMaxBernoulliOrder + 1 (the extra one feeds the tail bound)
const std::array<double, kMaxBernoulliOrder + 2>& bernoulli_coefficients()
{
    static const auto table = [] {
        std::array<double, kMaxBernoulliOrder + 2> c{};
        for (int k = 0; k < static_cast<int>(c.size()); ++k) {
            c[k] = boost::math::bernoulli_b2n<double>(k)
                   / boost::math::factorial<double>(static_cast<unsigned>(2 * k));
        }
        return c;
    }();
    return table;
}

// ln n split as hi + lo (lo from extended precision) so the phase t ln n can
// be reduced mod 2 pi without losing the digits above the binary point. hi is
// further Veltkamp-split for an exact product with t.
struct LogEntry {
    double hi;
    double lo;
    double hi_head;
    double hi_tail;
};

constexpr double kSplitter = 134217729.0; // 2^27 + 1

inline void veltkamp(double a, double& head, double& tail)
{
    const double c = kSplitter * a;
    head = c - (c - a);
    tail = a - head;
}

LogEntry make_log_entry(long n)
{
    const long double exact = std::log(static_cast<long double>(n));
    LogEntry e{};
    e.hi = static_cast<double>(exact);
    e.lo = static_cast<double>(exact - static_cast<long double>(e.hi));
    veltkamp(e.hi, e.hi_head, e.hi_tail);
    return e;
}

const std::vector<LogEntry>& log_table()
{
    static const auto table = [] {
        std::vector<LogEntry> logs(16384);
        for (std::size_t n = 1; n < logs.size(); ++n) {
            logs[n] = make_log_entry(static_cast<long>(n));
        }
        return logs;
    }();
    return table;
}

inline LogEntry log_n(long n)
{
    const auto& logs = log_table();
    return static_cast<std::size_t>(n) < logs.size() ? logs[n] : make_log_entry(n);
}

// t ln n reduced to roughly [-pi, pi]; t_head + t_tail is the split of t.
inline double reduced_phase(double t, double t_head, double t_tail, const LogEntry& ln)
{
    // 2 pi in three pieces of <= 33 bits: k * piece is exact for k < 2^20.
    constexpr double two_pi_1 = 6.2831853069365025;
    constexpr double two_pi_2 = 2.4308402025215864e-10;
    constexpr double two_pi_3 = 8.089064995183803e-21;
    constexpr double inv_two_pi = 0.15915494309189535;
    constexpr double round_magic = 6755399441055744.0; // 1.5 * 2^52

    const double p = t * ln.hi;
    const double err = ((t_head * ln.hi_head - p) + t_head * ln.hi_tail + t_tail * ln.hi_head)
                       + t_tail * ln.hi_tail;
    const double k = (p * inv_two_pi + round_magic) - round_magic;
    return ((p - k * two_pi_1) - k * two_pi_2) - k * two_pi_3 + (err + t * ln.lo);
}

// Size of the first omitted Bernoulli term times the |s+2K+1|/(sigma+2K+1)
// factor of the classical remainder estimate.
double tail_bound(Complex s, long n_cut, int order)
{
    const auto& c = bernoulli_coefficients();
    const double ln_n = std::log(static_cast<double>(n_cut));
    double poch = 1.0; // |s (s+1) ... (s+2K)|
    for (int j = 0; j <= 2 * order; ++j) {
        poch *= std::abs(s + static_cast<double>(j));
    }
    const double power = std::exp(-(s.real() + 2.0 * order + 1.0) * ln_n);
    const double denom = s.real() + 2.0 * order + 1.0;
    return std::abs(c[order + 1]) * poch * power * std::abs(s + (2.0 * order + 1.0)) / denom;
}

long cutoff_floor(double t, double factor)
{
    return static_cast<long>(std::ceil(factor * std::abs(t) / (2.0 * std::numbers::pi))) + 10;
}

} // namespace

bool ComplexPoint::in_window() const noexcept
{
    return std::isfinite(sigma) && std::isfinite(t) && sigma >= kWindowSigmaMin
           && sigma <= kWindowSigmaMax && std::abs(t) <= kWindowTMax;
}

void EvalParams::validate() const
{
    if (!(em_terms_factor >= 1.2)) {
        throw Error(ErrorKind::InvalidConfig, "em_terms_factor must be >= 1.2");
    }
    if (bernoulli_order < 4 || bernoulli_order > kMaxBernoulliOrder) {
        throw Error(ErrorKind::InvalidConfig, "bernoulli_order must lie in [4, 20]");
    }
    if (!(target_abs_error > 0.0 && target_abs_error <= 1e-6)) {
        throw Error(ErrorKind::InvalidConfig, "target_abs_error must lie in (0, 1e-6]");
    }
}

ZetaValue zeta(ComplexPoint point, const EvalParams& params, bool with_derivative)
{
    const Complex s = point.s();
    if (!point.in_window()) {
        std::ostringstream msg;
        msg << "s = " << point.sigma << " + " << point.t << "i outside evaluation window";
        throw Error(ErrorKind::WindowExceeded, msg.str());
    }
    if (std::abs(s - 1.0) < kPoleRadius) {
        throw Error(ErrorKind::PoleProximity, "s within 1e-6 of the pole at 1");
    }

    const int order = params.bernoulli_order;
    long n_cut = cutoff_floor(point.t, params.em_terms_factor);
    double bound = tail_bound(s, n_cut, order);
    // half the budget is left for rounding
    while (bound > 0.5 * params.target_abs_error) {
        if (n_cut >= kMaxTerms) {
            std::ostringstream msg;
            msg << "tail bound " << bound << " exceeds target " << params.target_abs_error
                << " at s = " << point.sigma << " + " << point.t << "i";
            throw Error(ErrorKind::PrecisionLoss, msg.str());
        }
        n_cut = std::min(kMaxTerms, n_cut + n_cut / 4 + 1);
        bound = tail_bound(s, n_cut, order);
    }

    // Direct part, summed from the small terms upward.
    double t_head = 0.0, t_tail = 0.0;
    veltkamp(point.t, t_head, t_tail);
    double re = 0.0, im = 0.0, dre = 0.0, dim = 0.0, mag_sum = 1.0;
    for (long n = n_cut - 1; n >= 1; --n) {
        const LogEntry entry = log_n(n);
        const double ln = entry.hi;
        const double mag = std::exp(-point.sigma * ln);
        mag_sum += mag;
        const double ang = reduced_phase(point.t, t_head, t_tail, entry);
        const double c = mag * std::cos(ang);
        const double sn = mag * std::sin(ang);
        re += c;
        im -= sn;
        if (with_derivative) {
            dre -= ln * c;
            dim += ln * sn;
        }
    }
    Complex sum{re, im};
    Complex dsum{dre, dim};

    // Integral and half-term corrections.
    const LogEntry cut_entry = log_n(n_cut);
    const double ln_n = cut_entry.hi;
    const Complex n_pow = std::polar(std::exp(-point.sigma * ln_n),
                                     -reduced_phase(point.t, t_head, t_tail, cut_entry)); // N^{-s}
    const double n_real = static_cast<double>(n_cut);
    sum += n_real * n_pow / (s - 1.0) + 0.5 * n_pow;
    if (with_derivative) {
        const Complex a = n_real * n_pow / (s - 1.0);
        dsum += -ln_n * a - a / (s - 1.0) - 0.5 * ln_n * n_pow;
    }

    // Bernoulli corrections: c_k (s)_{2k-1} N^{-s-2k+1}
    const auto& coef = bernoulli_coefficients();
    Complex poch = s;         // s (s+1) ... (s+2k-2)
    Complex dpoch = 1.0;      // its derivative in s
    Complex power = n_pow / n_real; // N^{-s-1}
    for (int k = 1; k <= order; ++k) {
        const Complex term = coef[k] * poch * power;
        sum += term;
        if (with_derivative) {
            dsum += coef[k] * (dpoch - ln_n * poch) * power;
        }
        // advance (s)_{2k-1} -> (s)_{2k+1}
        const Complex a = s + (2.0 * k - 1.0);
        const Complex b = s + (2.0 * k);
        dpoch = dpoch * a * b + poch * (a + b);
        poch *= a * b;
        power /= n_real * n_real;
    }

    // Truncation bound plus a rounding allowance proportional to the size of
    // the summed terms; the target is absolute for |zeta| <= 1, relative above.
    const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * mag_sum;
    const double est_error = bound + rounding;
    if (est_error > params.target_abs_error * std::max(1.0, std::abs(sum))) {
        std::ostringstream msg;
        msg << "error estimate " << est_error << " (rounding " << rounding
            << ") exceeds target at s = " << point.sigma
            << " + " << point.t << "i";
        throw Error(ErrorKind::PrecisionLoss, msg.str());
    }

    ZetaValue out;
    out.value = sum;
    if (with_derivative) {
        out.derivative = dsum;
    }
    out.est_error = est_error;
    out.terms = n_cut;
    return out;
}

double rs_theta(double t)
{
    if (!(t >= 7.0)) {
        throw Error(ErrorKind::DomainError, "rs_theta requires t >= 7");
    }
    using std::numbers::pi;
    return 0.5 * t * std::log(t / (2.0 * pi)) - 0.5 * t - pi / 8.0 + 1.0 / (48.0 * t)
           + 7.0 / (5760.0 * t * t * t);
}

double rs_theta_prime(double t)
{
    if (!(t >= 7.0)) {
        throw Error(ErrorKind::DomainError, "rs_theta_prime requires t >= 7");
    }
    using std::numbers::pi;
    const double t2 = t * t;
    return 0.5 * std::log(t / (2.0 * pi)) - 1.0 / (48.0 * t2) - 7.0 / (1920.0 * t2 * t2);
}

double hardy_z(double t, const EvalParams& params)
{
    const double theta = rs_theta(t);
    const ZetaValue zv = zeta({0.5, t}, params);
    const Complex rotated = std::polar(1.0, theta) * zv.value;
    // The asymptotic theta is off by roughly the next term 31/(80640 t^5).
    const double mag = std::abs(zv.value);
    const double theta_tail = 31.0 / (80640.0 * std::pow(t, 5));
    const double tol = 1e-8 * std::max(1.0, mag) + theta_tail * mag + zv.est_error;
    if (std::abs(rotated.imag()) > tol) {
        std::ostringstream msg;
        msg << "Z(" << t << ") has imaginary residual " << rotated.imag();
        throw Error(ErrorKind::PrecisionLoss, msg.str());
    }
    return rotated.real();
}

} // namespace zetastrips
