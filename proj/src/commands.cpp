#include "zetastrips/commands.hpp"

#include "zetastrips/error.hpp"
#include "zetastrips/io.hpp"
#include "zetastrips/svg.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace zetastrips {

namespace fs = std::filesystem;

namespace {

using std::numbers::ln2;
using std::numbers::pi;

int exit_code_for(const Error& e)
{
    switch (e.kind()) {
    case ErrorKind::Io: return kExitIo;
    case ErrorKind::CacheMissing:
    case ErrorKind::CacheCorrupt: return kExitMissingInput;
    case ErrorKind::InvalidConfig: return kExitUsage;
    default: return is_math_anomaly(e.kind()) ? kExitMathAnomaly : kExitIo;
    }
}

void ensure_writable(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error(ErrorKind::Io, "cannot create directory " + dir.string());
    }
    const fs::path probe = dir / ".write_probe";
    io::write_atomic(probe, "");
    fs::remove(probe, ec);
}

// -------- plotting --------

struct FigureData {
    io::CsvTable table;

    std::vector<double> column(std::string_view name) const
    {
        const std::size_t c = table.column(name);
        std::vector<double> out;
        out.reserve(table.rows.size());
        for (const auto& row : table.rows) {
            out.push_back(io::parse_double(row[c]));
        }
        return out;
    }
};

FigureData load_artifact(const fs::path& path)
{
    if (!fs::exists(path)) {
        throw Error(ErrorKind::CacheMissing, "missing input " + path.string());
    }
    return {io::parse_csv(io::read_file(path))};
}

nlohmann::json load_fits(const fs::path& path)
{
    if (!fs::exists(path)) {
        throw Error(ErrorKind::CacheMissing, "missing input " + path.string());
    }
    try {
        return nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::CacheCorrupt, path.string() + ": " + e.what());
    }
}

struct Window {
    double lo;
    double hi;
};

Window figure_window(int figure)
{
    static constexpr Window windows[] = {{1, 70}, {70, 140}, {140, 280}, {280, 560}, {560, 1102}};
    return windows[(figure >= 11 ? figure - 11 : figure - 3)];
}

void filter(std::vector<double>& x, std::vector<double>& y, Window w)
{
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] >= w.lo && x[i] <= w.hi) {
            fx.push_back(x[i]);
            fy.push_back(y[i]);
        }
    }
    x = std::move(fx);
    y = std::move(fy);
}

std::vector<double> line_through(const nlohmann::json& fit, const std::vector<double>& x,
                                 const std::function<double(double)>& transform)
{
    std::vector<double> y;
    const double a = fit.at("intercept").get<double>();
    const double b = fit.at("slope").get<double>();
    for (double v : x) {
        y.push_back(a + b * transform(v));
    }
    return y;
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    }
    return out;
}

std::string render_figure(int figure, const fs::path& dir)
{
    using svg::Plot;
    using svg::Scale;
    using svg::Series;

    if (figure == 1) {
        const auto gram = load_artifact(dir / "gram.csv");
        auto n = gram.column("n");
        auto ratio = gram.column("gap_ratio");
        auto geo = gram.column("gap_ratio_geo");
        for (auto* v : {&ratio, &geo}) {
            for (double& x : *v) {
                x = std::abs(x);
            }
        }
        Plot plot("1 - (g_n - g_{n-1}) / F", "Gram point number n", "|1 - gap ratio|");
        plot.x_scale(Scale::Log).y_scale(Scale::Log);
        plot.add({n, ratio, "#1f4e9c", "F(g_{n-1})"});
        plot.add({n, geo, "#c0392b", "F(sqrt(g_n g_{n-1}))"});
        return plot.render();
    }

    if (figure == 2) {
        const auto strips = load_artifact(dir / "strips.csv");
        const auto fits = load_fits(dir / "fits.json");
        const auto m = strips.column("m");
        Plot plot("Height of the bottom of strip m on sigma = 1/2", "strip number m",
                  "bottom height t");
        plot.add({m, strips.column("bottom"), "#1f4e9c", "bottoms"});
        const std::vector<double> ends{m.front(), m.back()};
        plot.add({ends, line_through(fits.at("bottoms"), ends, [](double v) { return v; }),
                  "#c0392b", "least squares", true});
        return plot.render();
    }

    if (figure >= 3 && figure <= 7) {
        const auto dev = load_artifact(dir / "deviations.csv");
        const auto arches = load_artifact(dir / "arches.csv");
        const Window w = figure_window(figure);
        auto m = dev.column("m");
        auto y = dev.column("bottom_dev");
        filter(m, y, w);
        Plot plot("Deviation of special Gram point m from 2 m pi / ln 2", "strip number m",
                  "bottom deviation");
        plot.x_range(w.lo, w.hi).y_range(-2.0, 2.0);
        plot.add({m, y, "#1f4e9c", ""});
        const auto centers = arches.column("m_center");
        const auto p = arches.column("p");
        const auto q = arches.column("q");
        for (std::size_t i = 0; i < centers.size(); ++i) {
            if (q[i] <= 2.0) {
                std::ostringstream label;
                label << "(" << p[i] << "," << q[i] << ")";
                plot.mark({centers[i], label.str()});
            }
        }
        return plot.render();
    }

    if (figure >= 8 && figure <= 10) {
        const auto strips = load_artifact(dir / "strips.csv");
        const auto m = strips.column("m");
        const auto zeros = strips.column("n_zeros");
        const auto width = strips.column("width");
        if (figure == 8) {
            Plot plot("Critical zeros per strip", "strip number m", "zeros in strip");
            plot.x_scale(Scale::Log).add({m, zeros, "#1f4e9c", ""});
            return plot.render();
        }
        if (figure == 9) {
            const auto fits = load_fits(dir / "fits.json");
            std::vector<double> density;
            for (std::size_t i = 0; i < m.size(); ++i) {
                density.push_back(zeros[i] / width[i]);
            }
            const auto grid = log_grid(m.front(), m.back(), 64);
            Plot plot("Zeros per unit height in strip m", "strip number m", "zeros / width");
            plot.x_scale(Scale::Log);
            plot.add({m, density, "#1f4e9c", "strips"});
            plot.add({grid, line_through(fits.at("density_vs_log_m"), grid,
                                         [](double v) { return std::log(v); }),
                      "#c0392b", "fit in ln m", true});
            return plot.render();
        }
        Plot plot("Strip width on sigma = 1/2", "strip number m", "width");
        plot.x_scale(Scale::Log).add({m, width, "#1f4e9c", ""});
        return plot.render();
    }

    if (figure >= 11 && figure <= 15) {
        const auto dev = load_artifact(dir / "deviations.csv");
        const Window w = figure_window(figure);
        auto m = dev.column("m");
        auto y = dev.column("density_dev");
        filter(m, y, w);
        Plot plot("Deviation of zeros / width from the fitted line", "strip number m",
                  "density deviation");
        plot.x_range(w.lo, w.hi).add({m, y, "#1f4e9c", ""});
        return plot.render();
    }

    // figure 16
    const auto strips = load_artifact(dir / "strips.csv");
    Plot plot("(primary index - 0.5) / zeros in strip", "strip number m", "primary position");
    plot.y_range(0.0, 1.0).add({strips.column("m"), strips.column("primary_stat"), "#1f4e9c", ""});
    return plot.render();
}

// -------- verification battery --------

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

template <typename Fn>
Check run_check(const std::string& name, Fn&& fn)
{
    Check c;
    c.name = name;
    try {
        std::ostringstream detail;
        detail << std::setprecision(12);
        c.passed = fn(detail);
        c.detail = detail.str();
    } catch (const std::exception& e) {
        c.passed = false;
        c.detail = e.what();
    }
    return c;
}

} // namespace

int cmd_compute(const RunConfig& config, std::ostream& out, std::ostream& err,
                const ComputeOptions& options, ComputeReport* report)
{
    try {
        config.validate();
        ensure_writable(config.out_dir);
        ensure_writable(config.cache_dir);
        Cache cache(config.cache_dir);
        ComputeReport local;
        const auto start = std::chrono::steady_clock::now();
        const Dataset data = compute_dataset(config, cache, local, err);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        io::write_atomic(config.out_dir / "gram.csv", gram_csv(data.gram));
        io::write_atomic(config.out_dir / "strips.csv", strips_csv(data.strips));
        io::write_atomic(config.out_dir / "zeros.csv", zeros_csv(data.strips));

        for (long k : options.dump_contours) {
            const auto path = trace(launch_point(k, config.eval, config.trace), Direction::Leftward,
                                    config.eval, config.trace, k);
            io::write_atomic(config.out_dir / ("contour_k" + std::to_string(k) + ".csv"),
                             contour_csv(path));
        }

        long zero_total = 0;
        for (const auto& s : data.strips) {
            zero_total += s.n_zeros();
        }
        out << "strips=" << data.strips.size() << "\n"
            << "zeros=" << zero_total << "\n"
            << "top=" << io::fmt12(data.strips.back().top) << "\n"
            << "cache=" << (local.fully_cached() ? "hit" : "populated") << "\n"
            << "seconds=" << std::fixed << std::setprecision(1) << elapsed << "\n";
        out.unsetf(std::ios::floatfield);
        if (report) {
            *report = local;
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "compute failed: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "compute failed: " << e.what() << "\n";
        return kExitIo;
    }
}

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        config.validate();
        const Cache cache(config.cache_dir);
        std::optional<Dataset> data;
        try {
            data = load_dataset(config, cache);
        } catch (const Error& e) {
            err << "analyze: " << e.what() << "\n"
                << "hint: re-run `zetastrips compute` with the same settings\n";
            return kExitMissingInput;
        }
        if (!data) {
            err << "analyze: no cached data for this configuration in " << config.cache_dir
                << "\nhint: run `zetastrips compute` with the same --t-max/--m-max first\n";
            return kExitMissingInput;
        }
        if (data->strips.size() < 100) {
            err << "analyze: the fits need at least 100 strips, have " << data->strips.size()
                << "\nhint: use --t-max 1000 or larger\n";
            return kExitUsage;
        }
        ensure_writable(config.out_dir);

        const AnalysisResult r = analyze(data->strips);
        io::write_atomic(config.out_dir / "fits.json", fits_json(r));
        io::write_atomic(config.out_dir / "deviations.csv",
                         deviations_csv(r.bottom_dev, r.density.residuals));
        io::write_atomic(config.out_dir / "arches.csv", arches_csv(r.arches));

        out << std::fixed;
        out << "strips=" << r.bottoms.n << "\n";
        out << std::setprecision(6) << "slope=" << r.bottoms.slope << "\n"
            << "slope_se=" << r.bottoms.slope_se << "\n";
        out << std::setprecision(4) << "intercept=" << r.bottoms.intercept << "\n"
            << "intercept_se=" << r.bottoms.intercept_se << "\n"
            << "tops_slope=" << r.tops.slope << "\n"
            << "tops_intercept=" << r.tops.intercept << "\n";
        out << std::setprecision(5) << "primary_mean=" << r.primary.mean << "\n"
            << "primary_variance=" << r.primary.variance << "\n";
        for (int q = 0; q < 4; ++q) {
            out << "primary_variance_q" << q + 1 << "=" << r.primary.quartile_variance[q] << "\n";
        }
        out << std::setprecision(6) << "density_slope_ln_m=" << r.density.vs_log_m.slope << "\n"
            << "density_intercept=" << r.density.vs_log_m.intercept << "\n";
        out << std::setprecision(3);
        if (r.q2_over_q1) {
            out << "arch_gap_ratio_q2=" << *r.q2_over_q1 << "\n";
        }
        if (r.q3_over_q1) {
            out << "arch_gap_ratio_q3=" << *r.q3_over_q1 << "\n";
        }
        out.unsetf(std::ios::floatfield);
        return kExitOk;
    } catch (const Error& e) {
        err << "analyze failed: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "analyze failed: " << e.what() << "\n";
        return kExitIo;
    }
}

int cmd_plot(const RunConfig& config, int figure, std::ostream& out, std::ostream& err)
{
    if (figure < 1 || figure > 16) {
        err << "plot: unknown figure " << figure << " (expected 1..16)\n";
        return kExitUsage;
    }
    try {
        const std::string svg = render_figure(figure, config.out_dir);
        const fs::path target = config.out_dir / ("fig" + std::to_string(figure) + ".svg");
        io::write_atomic(target, svg);
        out << target.string() << "\n";
        return kExitOk;
    } catch (const Error& e) {
        err << "plot: " << e.what() << "\n";
        if (e.kind() == ErrorKind::CacheMissing) {
            err << "hint: run `zetastrips compute` and `zetastrips analyze` first\n";
        }
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "plot: " << e.what() << "\n";
        return kExitMissingInput;
    }
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const auto start = std::chrono::steady_clock::now();
    const EvalParams& eval = config.eval;
    const TraceParams& trace_params = config.trace;
    try {
        eval.validate();
        trace_params.validate();
    } catch (const Error& e) {
        err << "verify: " << e.what() << "\n";
        return kExitUsage;
    }
    // looser targets need a wider difference step and a matching tolerance
    const double fd_step = std::max(1e-6, std::cbrt(eval.target_abs_error));
    const double deriv_tol =
        std::max(1e-6, 100.0 * std::pow(eval.target_abs_error, 2.0 / 3.0));

    std::vector<Check> checks;
    checks.push_back(run_check("zeta_two", [&](std::ostream& d) {
        const double v = zeta({2.0, 0.0}, eval).value.real();
        d << "zeta(2) = " << v;
        return std::abs(v - pi * pi / 6.0) < 1e-10;
    }));
    checks.push_back(run_check("zeta_zero", [&](std::ostream& d) {
        const double v = zeta({0.0, 0.0}, eval).value.real();
        d << "zeta(0) = " << v;
        return std::abs(v + 0.5) < 1e-10;
    }));
    checks.push_back(run_check("conjugate_symmetry", [&](std::ostream& d) {
        std::mt19937_64 rng(20131);
        std::uniform_real_distribution<double> sig(kWindowSigmaMin, kWindowSigmaMax);
        std::uniform_real_distribution<double> height(0.5, 100.0);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const ComplexPoint s{sig(rng), height(rng)};
            const Complex a = zeta({s.sigma, -s.t}, eval).value;
            const Complex b = std::conj(zeta(s, eval).value);
            worst = std::max(worst, std::abs(a - b));
        }
        d << "max deviation " << worst;
        return worst < 1e-10;
    }));
    checks.push_back(run_check("derivative", [&](std::ostream& d) {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> sig(0.0, 5.0);
        std::uniform_real_distribution<double> height(7.0, 100.0);
        double worst = 0.0;
        const double h = fd_step;
        for (int i = 0; i < 50; ++i) {
            const ComplexPoint s{sig(rng), height(rng)};
            const Complex analytic = *zeta(s, eval, true).derivative;
            const Complex fd = (zeta({s.sigma + h, s.t}, eval).value
                                - zeta({s.sigma - h, s.t}, eval).value)
                               / (2.0 * h);
            worst = std::max(worst, std::abs(analytic - fd) / std::max(1.0, std::abs(analytic)));
        }
        d << "max relative deviation " << worst << " (tolerance " << deriv_tol << ")";
        return worst < deriv_tol;
    }));
    checks.push_back(run_check("gram_minus_one", [&](std::ostream& d) {
        const double g = gram_point(-1).height;
        d << "g_-1 = " << g;
        return std::abs(g - 9.6669080561) < 1e-6;
    }));
    checks.push_back(run_check("first_zero", [&](std::ostream& d) {
        const auto zeros = find_zeros(14.0, 14.3, eval);
        d << "zeros found " << zeros.size();
        if (zeros.size() != 1) {
            return false;
        }
        d << ", t = " << zeros[0].t;
        return std::abs(zeros[0].t - 14.134725) < 1e-5;
    }));
    checks.push_back(run_check("special_gram_one", [&](std::ostream& d) {
        const auto b = special_gram_point(1, eval, trace_params);
        d << "strip 1 bottom = " << b.height;
        return std::abs(b.height - 9.6669080561) < 1e-6;
    }));
    checks.push_back(run_check("primary_zero_one", [&](std::ostream& d) {
        const auto z = primary_zero_of_strip(1, eval, trace_params);
        d << "primary zero = " << z.zero.sigma << " + " << z.zero.t << "i";
        return std::abs(z.zero.t - 14.134725) < 1e-5 && std::abs(z.zero.sigma - 0.5) < 1e-6;
    }));
    checks.push_back(run_check("strip_identity_t100", [&](std::ostream& d) {
        const long m_max = strips_below(100.0);
        const auto strips = build_strips(m_max, eval, trace_params, config.threads);
        long zeros = 0;
        for (const auto& s : strips) {
            zeros += s.n_zeros();
        }
        d << strips.size() << " strips, " << zeros << " zeros";
        // build_strips enforces zeros == Gram points per strip
        return static_cast<long>(strips.size()) == m_max;
    }));
    checks.push_back(run_check("cache_integrity", [&](std::ostream& d) {
        if (!fs::exists(config.cache_dir)) {
            d << "no cache";
            return true;
        }
        bool ok = true;
        int seen = 0;
        for (const auto& [kind, status] : Cache(config.cache_dir).audit()) {
            ++seen;
            if (status != CacheStatus::Valid) {
                ok = false;
                d << "checksum failure in '" << to_string(kind) << "' ";
            }
        }
        if (ok) {
            d << seen << " entries intact";
        }
        return ok;
    }));

    std::vector<std::string> failed;
    for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        if (!c.passed) {
            failed.push_back(c.name);
        }
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << "verify: " << checks.size() - failed.size() << "/" << checks.size() << " passed in "
        << std::fixed << std::setprecision(2) << elapsed << " s\n";
    out.unsetf(std::ios::floatfield);
    if (!failed.empty()) {
        err << "verify failed:";
        for (const auto& f : failed) {
            err << " " << f;
        }
        err << "\n";
        return kExitVerifyFailed;
    }
    return kExitOk;
}

} // namespace zetastrips
