#include "zetastrips/svg.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <limits>
#include <sstream>

namespace zetastrips::svg {

namespace {

constexpr int kMarginLeft = 78;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 56;

std::string num(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return {buf, res.ptr};
}

std::string tick_label(double v)
{
    char buf[64];
    const bool sci = v != 0.0 && (std::abs(v) < 1e-3 || std::abs(v) >= 1e5);
    const auto res = sci ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 0)
                         : std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return {buf, res.ptr};
}

std::string escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Axis {
    Scale scale = Scale::Linear;
    double lo = 0.0;
    double hi = 1.0;

    double transform(double v) const { return scale == Scale::Log ? std::log10(v) : v; }
    bool admissible(double v) const { return std::isfinite(v) && (scale == Scale::Linear || v > 0); }

    std::vector<double> ticks() const
    {
        std::vector<double> out;
        if (scale == Scale::Log) {
            for (double e = std::floor(transform(lo)); e <= std::ceil(transform(hi)); e += 1.0) {
                const double v = std::pow(10.0, e);
                if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) {
                    out.push_back(v);
                }
            }
            if (out.size() < 2) {
                out = {lo, hi};
            }
            return out;
        }
        const double span = hi - lo;
        const double raw = span / 6.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double f : {1.0, 2.0, 5.0, 10.0}) {
            if (f * mag >= raw) {
                step = f * mag;
                break;
            }
        }
        for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
            out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
        }
        return out;
    }
};

Axis fit_axis(Scale scale, std::optional<std::pair<double, double>> fixed,
              const std::vector<Series>& series, bool use_x)
{
    Axis axis;
    axis.scale = scale;
    if (fixed) {
        axis.lo = fixed->first;
        axis.hi = fixed->second;
        return axis;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : series) {
        for (double v : use_x ? s.x : s.y) {
            if (axis.admissible(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (!std::isfinite(lo)) {
        lo = scale == Scale::Log ? 1.0 : 0.0;
        hi = scale == Scale::Log ? 10.0 : 1.0;
    }
    if (scale == Scale::Log) {
        if (hi <= lo) {
            hi = lo * 10.0;
        }
        axis.lo = lo / 1.2;
        axis.hi = hi * 1.2;
    } else {
        const double pad = hi > lo ? 0.05 * (hi - lo) : std::max(1.0, std::abs(lo) * 0.1);
        axis.lo = lo - pad;
        axis.hi = hi + pad;
    }
    return axis;
}

} // namespace

Plot::Plot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label))
{
}

Plot& Plot::x_scale(Scale s) { x_scale_ = s; return *this; }
Plot& Plot::y_scale(Scale s) { y_scale_ = s; return *this; }
Plot& Plot::x_range(double lo, double hi) { x_range_ = std::pair{lo, hi}; return *this; }
Plot& Plot::y_range(double lo, double hi) { y_range_ = std::pair{lo, hi}; return *this; }
Plot& Plot::add(Series series) { series_.push_back(std::move(series)); return *this; }
Plot& Plot::mark(Marker marker) { markers_.push_back(std::move(marker)); return *this; }

std::string Plot::render(int width, int height) const
{
    const Axis xa = fit_axis(x_scale_, x_range_, series_, true);
    const Axis ya = fit_axis(y_scale_, y_range_, series_, false);
    const double plot_w = width - kMarginLeft - kMarginRight;
    const double plot_h = height - kMarginTop - kMarginBottom;
    const auto px = [&](double v) {
        return kMarginLeft + (xa.transform(v) - xa.transform(xa.lo))
                                 / (xa.transform(xa.hi) - xa.transform(xa.lo)) * plot_w;
    };
    const auto py = [&](double v) {
        return kMarginTop + plot_h
               - (ya.transform(v) - ya.transform(ya.lo))
                     / (ya.transform(ya.hi) - ya.transform(ya.lo)) * plot_h;
    };
    const auto inside = [&](double x, double y) {
        return xa.admissible(x) && ya.admissible(y) && x >= xa.lo && x <= xa.hi && y >= ya.lo
               && y <= ya.hi;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(title_) << "</text>\n";

    // frame and ticks
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << num(plot_w)
        << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double v : xa.ticks()) {
        const double x = px(v);
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(kMarginTop + plot_h) << "\" x2=\""
            << num(x) << "\" y2=\"" << num(kMarginTop + plot_h + 5) << "\" stroke=\"black\"/>"
            << "<text x=\"" << num(x) << "\" y=\"" << num(kMarginTop + plot_h + 18)
            << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
    }
    for (double v : ya.ticks()) {
        const double y = py(v);
        svg << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << num(y) << "\" x2=\""
            << kMarginLeft << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>"
            << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
    }
    svg << "<text x=\"" << num(kMarginLeft + plot_w / 2) << "\" y=\"" << height - 14
        << "\" text-anchor=\"middle\">" << escape(x_label_) << "</text>\n";
    svg << "<text transform=\"translate(18," << num(kMarginTop + plot_h / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label_) << "</text>\n";

    for (const auto& m : markers_) {
        if (!xa.admissible(m.x) || m.x < xa.lo || m.x > xa.hi) {
            continue;
        }
        const double x = px(m.x);
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << kMarginTop << "\" x2=\"" << num(x)
            << "\" y2=\"" << num(kMarginTop + plot_h)
            << "\" stroke=\"#b03030\" stroke-dasharray=\"4 3\"/>"
            << "<text x=\"" << num(x + 3) << "\" y=\"" << kMarginTop + 12
            << "\" fill=\"#b03030\" font-size=\"10\">" << escape(m.label) << "</text>\n";
    }

    for (const auto& s : series_) {
        if (s.as_line) {
            std::ostringstream pts;
            bool any = false;
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (inside(s.x[i], s.y[i])) {
                    pts << (any ? " " : "") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
                    any = true;
                }
            }
            if (any) {
                svg << "<polyline fill=\"none\" stroke=\"" << s.color
                    << "\" stroke-width=\"1.2\" points=\"" << pts.str() << "\"/>\n";
            }
        } else {
            svg << "<g fill=\"" << s.color << "\">\n";
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (inside(s.x[i], s.y[i])) {
                    svg << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
                        << "\" r=\"" << num(s.radius) << "\"/>\n";
                }
            }
            svg << "</g>\n";
        }
    }

    // legend
    int row = 0;
    for (const auto& s : series_) {
        if (s.label.empty()) {
            continue;
        }
        const double y = kMarginTop + 16 + 16 * row++;
        const double x = kMarginLeft + plot_w - 170;
        svg << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 8) << "\" width=\"10\" height=\"10\" fill=\""
            << s.color << "\"/><text x=\"" << num(x + 16) << "\" y=\"" << num(y + 1) << "\">"
            << escape(s.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace zetastrips::svg
