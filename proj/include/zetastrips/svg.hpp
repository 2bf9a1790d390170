#pragma once

#include <optional>
#include <string>
#include <vector>

namespace zetastrips::svg {

enum class Scale { Linear, Log };

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f4e9c";
    std::string label;
    bool as_line = false;
    double radius = 1.6;
};

struct Marker {
    double x = 0.0;
    std::string label;
};

/// Minimal scatter/line chart. Points that cannot be placed on a log axis
/// (non-positive values) are skipped.
class Plot {
public:
    Plot(std::string title, std::string x_label, std::string y_label);

    Plot& x_scale(Scale s);
    Plot& y_scale(Scale s);
    Plot& x_range(double lo, double hi);
    Plot& y_range(double lo, double hi);
    Plot& add(Series series);
    /// Dashed vertical guide with a small caption.
    Plot& mark(Marker marker);

    std::string render(int width = 720, int height = 480) const;

private:
    std::string title_;
    std::string x_label_;
    std::string y_label_;
    Scale x_scale_ = Scale::Linear;
    Scale y_scale_ = Scale::Linear;
    std::optional<std::pair<double, double>> x_range_;
    std::optional<std::pair<double, double>> y_range_;
    std::vector<Series> series_;
    std::vector<Marker> markers_;
};

} // namespace zetastrips::svg
