#include "fran/report.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "fran/errors.hpp"

namespace fran::harness {

namespace {

std::string num(double v, int digits = 12) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
    out << text;
    out.flush();
    if (!out) throw IoError("error while writing '" + path + "'");
}

// Tick positions covering [lo, hi] at a 1/2/5 step.
std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (span / step <= 6.0) break;
    }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) t.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    return t;
}

}  // namespace

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string to_csv(const ResultTable& table) {
    std::string out = std::string(kCsvHeader) + "\r\n";
    for (const auto& r : table.rows) {
        out += csv_field(num(r.sweep_value)) + ',';
        out += csv_field(mode_label(r, table.series_parameter)) + ',';
        out += r.monte_carlo ? "monte_carlo," : "analytic,";
        out += (r.mean ? num(*r.mean) : "") + ',';
        out += (r.ci95_half_width ? num(*r.ci95_half_width) : "") + ',';
        out += std::to_string(r.trials) + ',';
        out += (r.wall_time_s ? num(*r.wall_time_s, 6) : "") + ',';
        out += csv_field(r.status) + "\r\n";
    }
    return out;
}

std::string to_svg(const ResultTable& table) {
    constexpr double kWidth = 760, kHeight = 480, kLeft = 80, kRight = 250, kTop = 40, kBottom = 60;
    const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;

    struct Series {
        std::string label;
        bool monte_carlo;
        std::vector<std::pair<double, double>> points;
    };
    std::vector<Series> series;
    std::map<std::string, std::size_t> index;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& r : table.rows) {
        const std::string label = mode_label(r, table.series_parameter) + (r.monte_carlo ? " (MC)" : " (analytic)");
        auto [it, fresh] = index.emplace(label, series.size());
        if (fresh) series.push_back({label, r.monte_carlo, {}});
        if (!r.mean || !std::isfinite(*r.mean)) continue;
        series[it->second].points.emplace_back(r.sweep_value, *r.mean);
        xmin = std::min(xmin, r.sweep_value);
        xmax = std::max(xmax, r.sweep_value);
        ymin = std::min(ymin, *r.mean);
        ymax = std::max(ymax, *r.mean);
    }
    if (!(xmin <= xmax)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
    ymin = std::min(ymin, 0.0);
    if (ymax == ymin) ymax = ymin + 1.0;
    ymax += 0.05 * (ymax - ymin);
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return kTop + (1.0 - (y - ymin) / (ymax - ymin)) * plot_h; };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<title>" << xml_escape(table.experiment_id) << "</title>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks(xmin, xmax)) {
        out << "<line x1=\"" << num(sx(t), 6) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << num(sx(t), 6)
            << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(sx(t), 6) << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"middle\">"
            << num(t, 6) << "</text>\n";
    }
    for (double t : ticks(ymin, ymax)) {
        out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(sy(t), 6) << "\" x2=\"" << kLeft << "\" y2=\""
            << num(sy(t), 6) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(sy(t) + 4, 6) << "\" text-anchor=\"end\">" << num(t, 6)
            << "</text>\n";
    }
    out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
        << xml_escape(table.swept_parameter) << "</text>\n";
    const std::string ylabel = table.metric == Metric::Rate       ? "ergodic rate (nats/s/Hz)"
                               : table.metric == Metric::Coverage ? "coverage probability"
                                                                  : "mode share";
    out << "<text x=\"20\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << kTop + plot_h / 2 << ")\">" << ylabel << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = colors[(i / 2) % 8];
        if (!s.points.empty()) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
            if (s.monte_carlo) out << " stroke-dasharray=\"5,3\"";
            out << " points=\"";
            for (std::size_t k = 0; k < s.points.size(); ++k) {
                out << (k ? " " : "") << num(sx(s.points[k].first), 6) << ',' << num(sy(s.points[k].second), 6);
            }
            out << "\"/>\n";
            if (s.monte_carlo) {
                for (const auto& [x, y] : s.points) {
                    out << "<circle cx=\"" << num(sx(x), 6) << "\" cy=\"" << num(sy(y), 6) << "\" r=\"3\" fill=\""
                        << color << "\"/>\n";
                }
            }
        }
        const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
        const double lx = kLeft + plot_w + 15;
        out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 25 << "\" y2=\"" << ly << "\" stroke=\""
            << color << "\" stroke-width=\"1.5\"" << (s.monte_carlo ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
        out << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void emit_csv(const ResultTable& table, const std::string& path) { write_file(path, to_csv(table)); }
void emit_svg(const ResultTable& table, const std::string& path) { write_file(path, to_svg(table)); }

}  // namespace fran::harness
