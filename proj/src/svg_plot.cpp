#include "wavesynth/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "wavesynth/error.hpp"

namespace wavesynth {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> pts;
};

} // namespace

std::string render_svg(const Table& table, const PlotSpec& spec) {
    if (spec.y_columns.empty()) throw ConfigError("y", "at least one y column is required");
    (void)table.column_index(spec.x_column);
    std::vector<std::size_t> yi;
    for (const auto& y : spec.y_columns) yi.push_back(table.column_index(y));
    const bool grouped = !spec.group_column.empty();
    const std::size_t gi = grouped ? table.column_index(spec.group_column) : 0;

    std::map<std::string, std::size_t> index;
    std::vector<Series> series;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const double x = table.number(r, spec.x_column);
        for (std::size_t k = 0; k < yi.size(); ++k) {
            std::string label = spec.y_columns[k];
            if (grouped) label += " [" + format_cell(table.rows[r][gi]) + "]";
            auto [it, fresh] = index.emplace(label, series.size());
            if (fresh) series.push_back({label, {}});
            const double y = table.number(r, spec.y_columns[k]);
            if (!std::isfinite(x) || !std::isfinite(y) || (spec.log_y && y <= 0.0)) continue;
            series[it->second].pts.emplace_back(x, spec.log_y ? std::log10(y) : y);
        }
    }

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (auto [x, y] : s.pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!(x0 <= x1)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) y1 = y0 + 1.0;
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!spec.title.empty()) {
        o << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
          << "</text>\n";
    }
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0;
        const double yv = y0 + (y1 - y0) * k / 4.0;
        o << "<text x=\"" << sx(xv) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">" << fmt(xv)
          << "</text>\n";
        o << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">"
          << (spec.log_y ? "1e" + fmt(yv) : fmt(yv)) << "</text>\n";
    }
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
      << escape(spec.x_column) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = kPalette[k % kPalette.size()];
        if (!series[k].pts.empty()) {
            o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (auto [x, y] : series[k].pts) o << fmt(sx(x)) << ',' << fmt(sy(y)) << ' ';
            o << "\"/>\n";
        }
        const double ly = kTop + 14.0 * static_cast<double>(k) + 10.0;
        o << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - kRight + 30
          << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << kWidth - kRight + 34 << "\" y=\"" << ly + 4 << "\">" << escape(series[k].label)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

} // namespace wavesynth
