#include "ddrive/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ddrive {

namespace {

constexpr int kCanvas = 520;
constexpr int kMargin = 40;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// Maps workspace coordinates to canvas pixels, y flipped.
struct FieldMap {
    double x0, y0, scale;

    explicit FieldMap(const Workspace& ws) {
        const double extent = std::max(ws.width(), ws.height());
        scale = (kCanvas - 2.0 * kMargin) / extent;
        x0 = ws.x_min;
        y0 = ws.y_min;
    }
    double px(double x) const { return kMargin + (x - x0) * scale; }
    double py(double y) const { return kCanvas - kMargin - (y - y0) * scale; }
};

void polyline(std::ostringstream& out, const FieldMap& map, std::span<const Vec2> pts,
              const char* color, double width) {
    out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
        << "\" points=\"";
    for (const Vec2& p : pts) out << num(map.px(p.x)) << ',' << num(map.py(p.y)) << ' ';
    out << "\"/>\n";
}

void square(std::ostringstream& out, const FieldMap& map, const Vec2& p, const char* color) {
    const double s = 10.0;
    out << "  <rect x=\"" << num(map.px(p.x) - s / 2) << "\" y=\"" << num(map.py(p.y) - s / 2)
        << "\" width=\"" << s << "\" height=\"" << s << "\" fill=\"" << color
        << "\" stroke=\"black\"/>\n";
}

std::ostringstream svg_open(int w, int h) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return out;
}

void field_base(std::ostringstream& out, const FieldMap& map, const Workspace& ws) {
    out << "  <rect x=\"" << num(map.px(ws.x_min)) << "\" y=\"" << num(map.py(ws.y_max))
        << "\" width=\"" << num(ws.width() * map.scale) << "\" height=\""
        << num(ws.height() * map.scale) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (const Obstacle& obs : ws.obstacles) {
        out << "  <circle cx=\"" << num(map.px(obs.center.x)) << "\" cy=\""
            << num(map.py(obs.center.y)) << "\" r=\"" << num(obs.radius * map.scale)
            << "\" fill=\"#333333\"/>\n";
    }
    square(out, map, ws.start, "gold");
    square(out, map, ws.target, "limegreen");
}

// Simple line chart: series drawn into a fixed axes box with min/max labels.
struct Chart {
    std::ostringstream out;
    double t_min, t_max, v_min, v_max;
    static constexpr int kW = 640, kH = 320;

    Chart(double tmin, double tmax, double vmin, double vmax, const std::string& title)
        : out(svg_open(kW, kH).str()), t_min(tmin), t_max(tmax), v_min(vmin), v_max(vmax) {
        if (v_max - v_min < 1e-12) v_max = v_min + 1.0;
        out.seekp(0, std::ios_base::end);
        out << "  <rect x=\"" << kMargin << "\" y=\"20\" width=\"" << kW - 2 * kMargin
            << "\" height=\"" << kH - 60 << "\" fill=\"none\" stroke=\"black\"/>\n"
            << "  <text x=\"" << kW / 2 << "\" y=\"" << kH - 8
            << "\" text-anchor=\"middle\" font-size=\"12\">" << title << "</text>\n"
            << "  <text x=\"4\" y=\"26\" font-size=\"10\">" << num(v_max) << "</text>\n"
            << "  <text x=\"4\" y=\"" << kH - 40 << "\" font-size=\"10\">" << num(v_min)
            << "</text>\n";
    }
    double px(double t) const {
        return kMargin + (t - t_min) / (t_max - t_min) * (kW - 2.0 * kMargin);
    }
    double py(double v) const {
        return 20 + (v_max - v) / (v_max - v_min) * (kH - 60.0);
    }
    void series(std::span<const double> t, std::span<const double> v, const char* color) {
        out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < t.size(); ++i) {
            out << num(px(t[i])) << ',' << num(py(v[i])) << ' ';
        }
        out << "\"/>\n";
    }
    std::string close() {
        out << "</svg>\n";
        return out.str();
    }
};

}  // namespace

std::string workspace_svg(const Workspace& ws, const SampledPath* path,
                          const ControlPolygon* polygon) {
    const FieldMap map(ws);
    std::ostringstream out = svg_open(kCanvas, kCanvas);
    field_base(out, map, ws);
    if (path != nullptr) {
        polyline(out, map, std::span<const Vec2>(path->points), "royalblue", 2.0);
    }
    if (polygon != nullptr) {
        for (const Vec2& p : polygon->interior) {
            out << "  <circle cx=\"" << num(map.px(p.x)) << "\" cy=\"" << num(map.py(p.y))
                << "\" r=\"4\" fill=\"crimson\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

std::string overlay_svg(const Workspace& ws, const SimResult& result) {
    const FieldMap map(ws);
    std::ostringstream out = svg_open(kCanvas, kCanvas);
    field_base(out, map, ws);
    std::vector<Vec2> ref, act;
    ref.reserve(result.reference.size());
    act.reserve(result.actual.size());
    for (const Pose& p : result.reference) ref.push_back({p.x, p.y});
    for (const Pose& p : result.actual) act.push_back({p.x, p.y});
    polyline(out, map, ref, "royalblue", 2.0);
    polyline(out, map, act, "crimson", 1.5);
    out << "  <text x=\"" << kMargin << "\" y=\"16\" font-size=\"12\">"
        << "reference (blue) vs actual (red)</text>\n</svg>\n";
    return out.str();
}

std::string duty_svg(const SimResult& result) {
    std::vector<double> dl, dr;
    dl.reserve(result.duty.size());
    dr.reserve(result.duty.size());
    for (const auto& [l, r] : result.duty) {
        dl.push_back(l.direction == PwmDirection::forward ? l.duty : -l.duty);
        dr.push_back(r.direction == PwmDirection::forward ? r.duty : -r.duty);
    }
    Chart chart(result.time.front(), result.time.back(), -255, 255,
                "wheel duty cycle: left (blue), right (red)");
    chart.series(result.time, dl, "royalblue");
    chart.series(result.time, dr, "crimson");
    return chart.close();
}

std::string mc_summary_svg(const McReport& report) {
    std::vector<double> runs, lengths;
    double max_len = 0.0;
    for (const McRunRecord& rec : report.records) {
        runs.push_back(rec.run);
        lengths.push_back(rec.success ? rec.length : 0.0);
        max_len = std::max(max_len, rec.length);
    }
    std::ostringstream title;
    title << "per-run successful path length | SR=" << num(report.success_rate)
          << " avg=" << num(report.avg_length) << " m, SD=" << num(report.length_sd)
          << " m, shortest=" << num(report.shortest_length) << " m";
    Chart chart(0, std::max<double>(1.0, runs.size() - 1.0), 0, max_len * 1.05, title.str());
    chart.series(runs, lengths, "royalblue");
    return chart.close();
}

std::string sweep_svg(const std::vector<BetaReport>& reports) {
    std::ostringstream out = svg_open(640, 360);
    const double bar_w = 560.0 / (2.0 * reports.size());
    double max_len = 0.0;
    for (const BetaReport& br : reports) max_len = std::max(max_len, br.report.avg_length);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const BetaReport& br = reports[i];
        const double x = 50 + 2.0 * bar_w * i;
        const double sr_h = 260.0 * br.report.success_rate;
        const double len_h = max_len > 0 ? 260.0 * br.report.avg_length / (1.05 * max_len) : 0.0;
        out << "  <rect x=\"" << num(x) << "\" y=\"" << num(300 - sr_h) << "\" width=\""
            << num(bar_w * 0.8) << "\" height=\"" << num(sr_h) << "\" fill=\"royalblue\"/>\n"
            << "  <rect x=\"" << num(x + bar_w * 0.9) << "\" y=\"" << num(300 - len_h)
            << "\" width=\"" << num(bar_w * 0.8) << "\" height=\"" << num(len_h)
            << "\" fill=\"crimson\"/>\n"
            << "  <text x=\"" << num(x + bar_w * 0.8) << "\" y=\"318\" font-size=\"11\" "
            << "text-anchor=\"middle\">beta=" << num(br.beta) << "</text>\n";
    }
    out << "  <text x=\"320\" y=\"345\" font-size=\"12\" text-anchor=\"middle\">"
        << "success rate (blue, 0-1) and mean successful length (red, scaled)</text>\n"
        << "</svg>\n";
    return out.str();
}

}  // namespace ddrive
