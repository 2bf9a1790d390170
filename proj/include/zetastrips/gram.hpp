#pragma once

#include <optional>
#include <vector>

namespace zetastrips {

/// Solution of rs_theta(height) = n*pi. Indices start at n = -1 (t ~ 9.667).
struct GramPoint {
    long n = 0;
    double height = 0.0;
};

/// Smooth spacing model 2pi / ln(t / 2pi) for consecutive Gram points (t > 2pi).
double gap_model(double t);

/// Locates g_n (n >= -1) by safeguarded Newton on rs_theta.
GramPoint gram_point(long n);

/// Same, seeded from a nearby guess; the bracket widens by gap_model/2 steps.
GramPoint gram_point(long n, double seed);

struct GapRatio {
    long n = 0;
    double height = 0.0;    // g_n
    double gap = 0.0;       // g_n - g_{n-1}
    double ratio = 0.0;     // 1 - gap / F(g_{n-1})
    double ratio_geo = 0.0; // 1 - gap / F(sqrt(g_n g_{n-1}))
};

/// Convergence of the spacing model, one record per n in [0, n_max].
std::vector<GapRatio> gap_ratio_series(long n_max);

/// Consecutive Gram points g_{-1}, g_0, ... built once and then read-only.
class GramTable {
public:
    GramTable() = default;

    /// All Gram points with height <= t_max, plus the first one above it.
    static GramTable up_to(double t_max);
    /// Rebuild from stored heights (index -1 first); validates monotonicity.
    static GramTable from_heights(std::vector<double> heights);

    long first_index() const noexcept { return -1; }
    long last_index() const noexcept { return static_cast<long>(heights_.size()) - 2; }
    std::size_t size() const noexcept { return heights_.size(); }
    bool empty() const noexcept { return heights_.empty(); }

    double height(long n) const;
    const std::vector<double>& heights() const noexcept { return heights_; }

    /// Number of tabulated Gram points g with lo <= g < hi.
    long count_in(double lo, double hi) const;

    /// Index of the tabulated Gram point within `tol` of t, if any.
    std::optional<long> index_of(double t, double tol) const;

    std::vector<GapRatio> gap_ratios() const;

private:
    std::vector<double> heights_; // heights_[i] = g_{i-1}
};

} // namespace zetastrips
