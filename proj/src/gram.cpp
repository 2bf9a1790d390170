#include "zetastrips/gram.hpp"

#include "zetastrips/error.hpp"
#include "zetastrips/zeta.hpp"

#include <boost/math/special_functions/lambert_w.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace zetastrips {

namespace {

using std::numbers::pi;

constexpr int kMaxIterations = 60;
constexpr double kThetaFloor = 7.0;

// Initial guess from theta ~ t/2 ln(t / 2 pi e) - pi/8.
double lambert_seed(long n)
{
    const double x = (static_cast<double>(n) + 0.125) / std::numbers::e;
    const double w = boost::math::lambert_w0(std::max(x, -1.0 / std::numbers::e));
    return std::max(kThetaFloor + 1.0, 2.0 * pi * std::exp(1.0 + w));
}

double solve_gram(long n, double seed)
{
    if (n < -1) {
        throw Error(ErrorKind::DomainError, "Gram points are indexed from n = -1");
    }
    const double target = static_cast<double>(n) * pi;
    const auto residual = [&](double t) { return rs_theta(t) - target; };

    // Bracket the root, widening by half a modelled gap per step.
    double lo = std::max(kThetaFloor, seed);
    double hi = lo;
    while (residual(lo) > 0.0) {
        hi = lo;
        lo = std::max(kThetaFloor, lo - 0.5 * gap_model(lo));
        if (lo == kThetaFloor && residual(lo) > 0.0) {
            throw Error(ErrorKind::ConvergenceFailure, "cannot bracket Gram point from below");
        }
    }
    while (residual(hi) < 0.0) {
        lo = hi;
        hi += 0.5 * gap_model(hi);
    }

    double t = std::clamp(seed, lo, hi);
    for (int it = 0; it < kMaxIterations; ++it) {
        const double f = residual(t);
        if (f == 0.0) {
            return t;
        }
        (f < 0.0 ? lo : hi) = t;
        double next = t - f / rs_theta_prime(t);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - t) <= 1e-15 * t || hi - lo <= 4e-16 * hi) {
            return next;
        }
        t = next;
    }
    std::ostringstream msg;
    msg << "Gram point " << n << " did not converge";
    throw Error(ErrorKind::ConvergenceFailure, msg.str(), n);
}

} // namespace

double gap_model(double t)
{
    if (!(t > 2.0 * pi)) {
        throw Error(ErrorKind::DomainError, "gap_model requires t > 2 pi");
    }
    return 2.0 * pi / std::log(t / (2.0 * pi));
}

GramPoint gram_point(long n)
{
    return {n, solve_gram(n, lambert_seed(n))};
}

GramPoint gram_point(long n, double seed)
{
    return {n, solve_gram(n, seed)};
}

GramTable GramTable::up_to(double t_max)
{
    GramTable table;
    double g = gram_point(-1).height;
    table.heights_.push_back(g);
    for (long n = 0; g <= t_max; ++n) {
        g = solve_gram(n, g + gap_model(g));
        table.heights_.push_back(g);
    }
    return table;
}

GramTable GramTable::from_heights(std::vector<double> heights)
{
    for (std::size_t i = 1; i < heights.size(); ++i) {
        if (!(heights[i] > heights[i - 1])) {
            throw Error(ErrorKind::CacheCorrupt, "Gram heights not strictly increasing");
        }
    }
    GramTable table;
    table.heights_ = std::move(heights);
    return table;
}

double GramTable::height(long n) const
{
    if (n < first_index() || n > last_index()) {
        std::ostringstream msg;
        msg << "Gram index " << n << " not tabulated (last " << last_index() << ")";
        throw Error(ErrorKind::DomainError, msg.str(), n);
    }
    return heights_[static_cast<std::size_t>(n + 1)];
}

long GramTable::count_in(double lo, double hi) const
{
    const auto first = std::lower_bound(heights_.begin(), heights_.end(), lo);
    const auto last = std::lower_bound(heights_.begin(), heights_.end(), hi);
    return static_cast<long>(std::max<std::ptrdiff_t>(0, last - first));
}

std::optional<long> GramTable::index_of(double t, double tol) const
{
    const auto it = std::lower_bound(heights_.begin(), heights_.end(), t);
    std::optional<long> best;
    double best_dist = tol;
    for (auto cand : {it, it == heights_.begin() ? it : std::prev(it)}) {
        if (cand == heights_.end()) {
            continue;
        }
        const double dist = std::abs(*cand - t);
        if (dist <= best_dist) {
            best_dist = dist;
            best = static_cast<long>(cand - heights_.begin()) - 1;
        }
    }
    return best;
}

std::vector<GapRatio> GramTable::gap_ratios() const
{
    std::vector<GapRatio> out;
    for (std::size_t i = 1; i < heights_.size(); ++i) {
        const double prev = heights_[i - 1];
        const double cur = heights_[i];
        const double gap = cur - prev;
        out.push_back({static_cast<long>(i) - 1, cur, gap, 1.0 - gap / gap_model(prev),
                       1.0 - gap / gap_model(std::sqrt(cur * prev))});
    }
    return out;
}

std::vector<GapRatio> gap_ratio_series(long n_max)
{
    if (n_max < 1) {
        throw Error(ErrorKind::DomainError, "gap_ratio_series requires n_max >= 1");
    }
    std::vector<double> heights{gram_point(-1).height};
    for (long n = 0; n <= n_max; ++n) {
        const double prev = heights.back();
        heights.push_back(solve_gram(n, prev + gap_model(prev)));
    }
    return GramTable::from_heights(std::move(heights)).gap_ratios();
}

} // namespace zetastrips
