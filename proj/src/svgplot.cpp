#include "netspect/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "netspect/errors.hpp"

namespace netspect {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 64, kRight = 24, kTop = 40, kBottom = 48;

const char* series_color(std::size_t i) {
    static const char* colors[] = {"#1f3d7a", "#b03030", "#2e7d32", "#8858a8", "#b07c20"};
    return colors[i % 5];
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string num_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct Scale {
    double x_min, x_max, y_min, y_max;

    double px(double x) const {
        return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
    }
    double py(double y) const {
        return kHeight - kBottom - (y - y_min) / (y_max - y_min) * (kHeight - kTop - kBottom);
    }
};

Scale fit_scale(const std::vector<PlotSeries>& series) {
    Scale s{1e300, -1e300, 1e300, -1e300};
    for (const auto& sr : series) {
        for (const auto& p : sr.points) {
            s.x_min = std::min(s.x_min, p.x);
            s.x_max = std::max(s.x_max, p.x);
            s.y_min = std::min(s.y_min, p.y);
            s.y_max = std::max(s.y_max, p.y);
        }
    }
    if (s.y_min > 0) s.y_min = 0;  // keep the zero line visible
    if (s.y_max < 0) s.y_max = 0;
    const double x_pad = (s.x_max - s.x_min) * 0.05 + 0.25;
    double y_pad = (s.y_max - s.y_min) * 0.08;
    if (y_pad == 0) y_pad = 1.0;
    s.x_min -= x_pad;
    s.x_max += x_pad;
    s.y_min -= y_pad;
    s.y_max += y_pad;
    return s;
}

std::string chart_frame(const std::string& title, const std::string& x_label,
                        const std::string& y_label, const Scale& s,
                        const std::string& config_hash) {
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
           num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    out += "<!-- config_hash: " + config_hash + " -->\n";
    out += "<rect width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(kWidth / 2) +
           "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">" +
           title + "</text>\n";
    // axes
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" +
           num(kWidth - kRight) + "\" y2=\"" + num(kHeight - kBottom) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) +
           "\" y2=\"" + num(kHeight - kBottom) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    // zero line
    if (s.y_min < 0 && s.y_max > 0)
        out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(s.py(0)) + "\" x2=\"" +
               num(kWidth - kRight) + "\" y2=\"" + num(s.py(0)) +
               "\" stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"4,3\"/>\n";
    // ticks: 5 on each axis
    for (int i = 0; i <= 4; ++i) {
        const double xv = s.x_min + (s.x_max - s.x_min) * i / 4.0;
        const double yv = s.y_min + (s.y_max - s.y_min) * i / 4.0;
        out += "<text x=\"" + num(s.px(xv)) + "\" y=\"" + num(kHeight - kBottom + 16) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
               num_tick(xv) + "</text>\n";
        out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(s.py(yv) + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
               num_tick(yv) + "</text>\n";
    }
    out += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" + num(kHeight - 12) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" + x_label +
           "</text>\n";
    out += "<text x=\"16\" y=\"" + num((kTop + kHeight - kBottom) / 2) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 16 " +
           num((kTop + kHeight - kBottom) / 2) + ")\">" + y_label + "</text>\n";
    return out;
}

std::string legend(const std::vector<PlotSeries>& series) {
    if (series.size() < 2) return "";
    std::string out;
    double y = kTop + 6;
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += "<line x1=\"" + num(kWidth - kRight - 120) + "\" y1=\"" + num(y) + "\" x2=\"" +
               num(kWidth - kRight - 96) + "\" y2=\"" + num(y) + "\" stroke=\"" +
               series_color(i) + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + num(kWidth - kRight - 90) + "\" y=\"" + num(y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + series[i].name + "</text>\n";
        y += 16;
    }
    return out;
}

std::string polyline(const PlotSeries& sr, const Scale& s, const char* color) {
    std::string out = "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < sr.points.size(); ++i) {
        if (i) out += " ";
        out += num(s.px(sr.points[i].x)) + "," + num(s.py(sr.points[i].y));
    }
    out += "\"/>\n";
    return out;
}

void require_points(const std::vector<PlotSeries>& series) {
    for (const auto& sr : series)
        if (!sr.points.empty()) return;
    throw MissingResults("no data points to plot");
}

}  // namespace

std::string svg_marker_chart(const std::string& title, const std::string& x_label,
                             const std::string& y_label, const std::vector<PlotSeries>& series,
                             const std::string& config_hash) {
    require_points(series);
    const Scale s = fit_scale(series);
    std::string out = chart_frame(title, x_label, y_label, s, config_hash);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = series_color(i);
        out += polyline(series[i], s, color);
        for (const auto& p : series[i].points) {
            const double half = 4.0;
            out += "<rect x=\"" + num(s.px(p.x) - half) + "\" y=\"" + num(s.py(p.y) - half) +
                   "\" width=\"" + num(2 * half) + "\" height=\"" + num(2 * half) +
                   "\" stroke=\"" + color + "\" stroke-width=\"1.2\" fill=\"" +
                   (p.filled ? "black" : "white") + "\"/>\n";
        }
    }
    out += legend(series);
    out += "</svg>\n";
    return out;
}

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<PlotSeries>& series,
                           const std::string& config_hash) {
    require_points(series);
    const Scale s = fit_scale(series);
    std::string out = chart_frame(title, x_label, y_label, s, config_hash);
    for (std::size_t i = 0; i < series.size(); ++i) out += polyline(series[i], s, series_color(i));
    out += legend(series);
    out += "</svg>\n";
    return out;
}

}  // namespace netspect
