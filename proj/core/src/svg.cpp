#include "hpland/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "hpland/errors.hpp"

namespace hpland {

namespace {

std::string fmt(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    return buffer;
}

std::string fmt_tick(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4g", value);
    return buffer;
}

std::string escape_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

// Dark-violet-to-yellow perceptual ramp (viridis anchor colors, linearly
// interpolated).
std::string colormap_hex(double t) {
    static constexpr std::array<std::array<double, 3>, 5> kAnchors = {{
        {68.0, 1.0, 84.0},
        {59.0, 82.0, 139.0},
        {33.0, 145.0, 140.0},
        {94.0, 201.0, 98.0},
        {253.0, 231.0, 37.0},
    }};
    t = std::clamp(t, 0.0, 1.0);
    const double scaled = t * static_cast<double>(kAnchors.size() - 1);
    const std::size_t low = std::min(static_cast<std::size_t>(scaled), kAnchors.size() - 2);
    const double frac = scaled - static_cast<double>(low);
    char buffer[8];
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x",
                  static_cast<int>(std::lround(kAnchors[low][0] +
                                               frac * (kAnchors[low + 1][0] - kAnchors[low][0]))),
                  static_cast<int>(std::lround(kAnchors[low][1] +
                                               frac * (kAnchors[low + 1][1] - kAnchors[low][1]))),
                  static_cast<int>(std::lround(kAnchors[low][2] +
                                               frac * (kAnchors[low + 1][2] - kAnchors[low][2]))));
    return buffer;
}

class SvgCanvas {
public:
    SvgCanvas(double width, double height) : width_(width), height_(height) {}

    void rect(double x, double y, double w, double h, const std::string& fill) {
        body_ << "<rect x=\"" << fmt(x, 2) << "\" y=\"" << fmt(y, 2) << "\" width=\"" << fmt(w, 2)
              << "\" height=\"" << fmt(h, 2) << "\" fill=\"" << fill << "\"/>\n";
    }

    void frame(double x, double y, double w, double h) {
        body_ << "<rect x=\"" << fmt(x, 2) << "\" y=\"" << fmt(y, 2) << "\" width=\"" << fmt(w, 2)
              << "\" height=\"" << fmt(h, 2) << "\" fill=\"none\" stroke=\"#333333\""
              << " stroke-width=\"1\"/>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              bool dashed = false) {
        body_ << "<line x1=\"" << fmt(x1, 2) << "\" y1=\"" << fmt(y1, 2) << "\" x2=\"" << fmt(x2, 2)
              << "\" y2=\"" << fmt(y2, 2) << "\" stroke=\"" << stroke << "\" stroke-width=\"1\"";
        if (dashed) {
            body_ << " stroke-dasharray=\"5,4\"";
        }
        body_ << "/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& points, const std::string& stroke,
                  double opacity) {
        body_ << "<polyline points=\"";
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i != 0) {
                body_ << ' ';
            }
            body_ << fmt(points[i].first, 2) << ',' << fmt(points[i].second, 2);
        }
        body_ << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.2\" opacity=\""
              << fmt(opacity, 2) << "\"/>\n";
    }

    void triangle(double cx, double cy, double half, bool upward) {
        const double tip = upward ? cy - half : cy + half;
        const double base = upward ? cy + half : cy - half;
        body_ << "<polygon points=\"" << fmt(cx, 2) << ',' << fmt(tip, 2) << ' '
              << fmt(cx - half, 2) << ',' << fmt(base, 2) << ' ' << fmt(cx + half, 2) << ','
              << fmt(base, 2) << "\" fill=\"#ffffff\" stroke=\"#111111\" stroke-width=\"1\"/>\n";
    }

    void circle(double cx, double cy, double r, const std::string& fill) {
        body_ << "<circle cx=\"" << fmt(cx, 2) << "\" cy=\"" << fmt(cy, 2) << "\" r=\"" << fmt(r, 2)
              << "\" fill=\"" << fill << "\"/>\n";
    }

    void text(double x, double y, const std::string& content, int size,
              const std::string& anchor = "middle", const std::string& transform = "") {
        body_ << "<text x=\"" << fmt(x, 2) << "\" y=\"" << fmt(y, 2) << "\" font-size=\"" << size
              << "\" font-family=\"sans-serif\" fill=\"#222222\" text-anchor=\"" << anchor << '"';
        if (!transform.empty()) {
            body_ << " transform=\"" << transform << '"';
        }
        body_ << '>' << escape_text(content) << "</text>\n";
    }

    std::string str() const {
        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_, 0)
            << "\" height=\"" << fmt(height_, 0) << "\" viewBox=\"0 0 " << fmt(width_, 0) << ' '
            << fmt(height_, 0) << "\">\n";
        out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
        out << body_.str();
        out << "</svg>\n";
        return out.str();
    }

private:
    double width_;
    double height_;
    std::ostringstream body_;
};

struct Axes {
    double left;
    double top;
    double width;
    double height;

    double x_px(double unit) const { return left + unit * width; }
    // value in [lo, hi] mapped with the value axis growing upward
    double y_px(double value, double lo, double hi) const {
        const double t = hi > lo ? (value - lo) / (hi - lo) : 0.5;
        return top + height - t * height;
    }
};

void draw_unit_x_ticks(SvgCanvas& svg, const Axes& ax) {
    for (double tick : {0.0, 0.5, 1.0}) {
        const double px = ax.x_px(tick);
        svg.line(px, ax.top + ax.height, px, ax.top + ax.height + 4, "#333333");
        svg.text(px, ax.top + ax.height + 16, fmt_tick(tick), 11);
    }
}

void draw_value_y_ticks(SvgCanvas& svg, const Axes& ax, double lo, double hi) {
    for (double tick : {lo, 0.5 * (lo + hi), hi}) {
        const double py = ax.y_px(tick, lo, hi);
        svg.line(ax.left - 4, py, ax.left, py, "#333333");
        svg.text(ax.left - 7, py + 4, fmt_tick(tick), 11, "end");
    }
}

}  // namespace

std::string heatmap_svg(const GridValues& grid, const GridOptima& optima,
                        const std::string& title, const std::string& x_label,
                        const std::string& y_label) {
    const std::size_t rx = grid.spec.resolution_x;
    const std::size_t ry = grid.spec.resolution_y;
    if (grid.values.size() != rx * ry) {
        throw ValidationError("heatmap_svg: grid buffer size does not match its resolution");
    }

    const Axes ax{62.0, 34.0, 372.0, 372.0};
    SvgCanvas svg(520.0, 454.0);

    double vmin = grid.values[0];
    double vmax = grid.values[0];
    for (double v : grid.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    const double span = vmax > vmin ? vmax - vmin : 1.0;

    const double cw = ax.width / static_cast<double>(rx);
    const double ch = ax.height / static_cast<double>(ry);
    for (std::size_t iy = 0; iy < ry; ++iy) {
        for (std::size_t ix = 0; ix < rx; ++ix) {
            const double t = (grid.at(ix, iy) - vmin) / span;
            // y axis grows upward: row iy sits ch below the rows above it.
            svg.rect(ax.left + static_cast<double>(ix) * cw,
                     ax.top + ax.height - static_cast<double>(iy + 1) * ch, cw + 0.05, ch + 0.05,
                     colormap_hex(t));
        }
    }
    svg.frame(ax.left, ax.top, ax.width, ax.height);

    for (const GridNode& node : optima.maxima) {
        svg.triangle(ax.left + (static_cast<double>(node.ix) + 0.5) * cw,
                     ax.top + ax.height - (static_cast<double>(node.iy) + 0.5) * ch, 5.0, true);
    }
    for (const GridNode& node : optima.minima) {
        svg.triangle(ax.left + (static_cast<double>(node.ix) + 0.5) * cw,
                     ax.top + ax.height - (static_cast<double>(node.iy) + 0.5) * ch, 5.0, false);
    }

    // Color bar with min/max labels.
    const double bar_x = ax.left + ax.width + 18.0;
    constexpr int kBarSteps = 64;
    for (int i = 0; i < kBarSteps; ++i) {
        const double t = (static_cast<double>(i) + 0.5) / kBarSteps;
        svg.rect(bar_x, ax.top + ax.height * (1.0 - static_cast<double>(i + 1) / kBarSteps), 14.0,
                 ax.height / kBarSteps + 0.05, colormap_hex(t));
    }
    svg.frame(bar_x, ax.top, 14.0, ax.height);
    svg.text(bar_x + 18.0, ax.top + ax.height, fmt_tick(vmin), 11, "start");
    svg.text(bar_x + 18.0, ax.top + 8.0, fmt_tick(vmax), 11, "start");

    draw_unit_x_ticks(svg, ax);
    for (double tick : {0.0, 0.5, 1.0}) {
        const double py = ax.top + ax.height * (1.0 - tick);
        svg.line(ax.left - 4, py, ax.left, py, "#333333");
        svg.text(ax.left - 7, py + 4, fmt_tick(tick), 11, "end");
    }

    svg.text(ax.left + ax.width / 2.0, 20.0, title, 13);
    svg.text(ax.left + ax.width / 2.0, ax.top + ax.height + 34.0, x_label, 12);
    svg.text(16.0, ax.top + ax.height / 2.0, y_label, 12, "middle",
             "rotate(-90 16 " + fmt(ax.top + ax.height / 2.0, 2) + ")");
    return svg.str();
}

std::string ice_svg(const IceCurveSet& curves, const std::string& title,
                    const std::string& x_label) {
    if (curves.curves.empty()) {
        throw ValidationError("ice_svg: no curves to draw");
    }

    const Axes ax{56.0, 34.0, 400.0, 300.0};
    SvgCanvas svg(472.0, 384.0);

    double lo = curves.curves[0][0];
    double hi = lo;
    for (const auto& curve : curves.curves) {
        for (double v : curve) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi <= lo) {
        lo -= 0.5;
        hi += 0.5;
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }

    const std::size_t count = curves.curves.size();
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<std::pair<double, double>> points;
        points.reserve(curves.positions.size());
        for (std::size_t i = 0; i < curves.positions.size(); ++i) {
            points.emplace_back(ax.x_px(curves.positions[i]),
                                ax.y_px(curves.curves[c][i], lo, hi));
        }
        const double t = count > 1 ? static_cast<double>(c) / static_cast<double>(count - 1) : 0.5;
        svg.polyline(points, colormap_hex(t), 0.8);
    }
    svg.frame(ax.left, ax.top, ax.width, ax.height);

    draw_unit_x_ticks(svg, ax);
    draw_value_y_ticks(svg, ax, lo, hi);
    svg.text(ax.left + ax.width / 2.0, 20.0, title, 13);
    svg.text(ax.left + ax.width / 2.0, ax.top + ax.height + 34.0, x_label, 12);
    return svg.str();
}

std::string modality_svg(const PhaseModality& phase, const std::string& title) {
    if (phase.configs.empty()) {
        throw ValidationError("modality_svg: no configurations to draw");
    }

    const Axes ax{56.0, 34.0, 400.0, 300.0};
    SvgCanvas svg(472.0, 384.0);

    double phi_max = 1.0;
    for (const auto& result : phase.configs) {
        phi_max = std::max(phi_max, result.phi);
    }
    const double hi = 1.05 * phi_max + 0.1;
    const double lo = 0.0;
    const std::size_t count = phase.configs.size();

    svg.frame(ax.left, ax.top, ax.width, ax.height);
    svg.line(ax.left, ax.y_px(1.0, lo, hi), ax.left + ax.width, ax.y_px(1.0, lo, hi), "#666666",
             true);

    const auto category_color = [](ModalityCategory category) {
        switch (category) {
            case ModalityCategory::Unimodal:
                return "#1f77b4";
            case ModalityCategory::Multimodal:
                return "#d62728";
            case ModalityCategory::Uncategorized:
                return "#9a9a9a";
        }
        return "#000000";
    };
    for (const auto& result : phase.configs) {
        const double x =
            count > 1 ? static_cast<double>(result.conf_index) / static_cast<double>(count - 1)
                      : 0.5;
        svg.circle(ax.x_px(x), ax.y_px(result.phi, lo, hi), 3.5, category_color(result.category));
    }

    // Legend.
    const double legend_x = ax.left + ax.width - 118.0;
    const char* labels[] = {"unimodal", "multimodal", "uncategorized"};
    const ModalityCategory cats[] = {ModalityCategory::Unimodal, ModalityCategory::Multimodal,
                                     ModalityCategory::Uncategorized};
    for (int i = 0; i < 3; ++i) {
        const double y = ax.top + 14.0 + 15.0 * i;
        svg.circle(legend_x, y - 3.5, 3.5, category_color(cats[i]));
        svg.text(legend_x + 9.0, y, labels[i], 11, "start");
    }

    // Configuration-index ticks (left, middle, right).
    const int max_conf = phase.configs.back().conf_index;
    for (double tick : {0.0, 0.5, 1.0}) {
        const double px = ax.x_px(tick);
        svg.line(px, ax.top + ax.height, px, ax.top + ax.height + 4, "#333333");
        svg.text(px, ax.top + ax.height + 16,
                 fmt_tick(std::round(tick * static_cast<double>(max_conf))), 11);
    }
    draw_value_y_ticks(svg, ax, lo, hi);
    svg.text(ax.left + ax.width / 2.0, 20.0, title, 13);
    svg.text(ax.left + ax.width / 2.0, ax.top + ax.height + 34.0, "configuration index", 12);
    svg.text(16.0, ax.top + ax.height / 2.0, "folding statistic", 12, "middle",
             "rotate(-90 16 " + fmt(ax.top + ax.height / 2.0, 2) + ")");
    return svg.str();
}

}  // namespace hpland
