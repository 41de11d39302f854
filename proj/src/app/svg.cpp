#include "ricdyn/app/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numbers>

#include <fmt/format.h>

namespace ricdyn::app {
namespace {

constexpr double kPi = std::numbers::pi;

std::string escape(const std::string& s) {
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

std::string viridis(double u) {
    static constexpr double stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    u = std::clamp(u, 0.0, 1.0) * 4.0;
    const int k = std::min(3, static_cast<int>(u));
    const double f = u - k;
    int rgb[3];
    for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[k][c] + f * (stops[k + 1][c] - stops[k][c])));
    return fmt::format("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]);
}

std::vector<double> ticks(double lo, double hi) {
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> out;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
        out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    }
    return out;
}

Range padded(double lo, double hi) {
    if (!(hi > lo)) {
        const double pad = std::max(1e-3, 0.1 * std::abs(lo));
        return {lo - pad, hi + pad};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

struct Frame {
    double left, top, width, height;
    Range x, y;

    double px(double v) const { return left + (v - x.lo) / (x.hi - x.lo) * width; }
    double py(double v) const { return top + height - (v - y.lo) / (y.hi - y.lo) * height; }
    bool inside(double vx, double vy) const { return vx >= x.lo && vx <= x.hi && vy >= y.lo && vy <= y.hi; }
};

void open_svg(std::string& s, double w, double h) {
    fmt::format_to(std::back_inserter(s),
                   "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\" "
                   "font-family=\"sans-serif\" font-size=\"12\">\n"
                   "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
                   w, h, w, h);
}

void axes(std::string& s, const Frame& f, const std::string& x_label, const std::string& y_label) {
    auto o = std::back_inserter(s);
    fmt::format_to(o, "<g><rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                   f.left, f.top, f.width, f.height);
    for (double v : ticks(f.x.lo, f.x.hi)) {
        const double x = f.px(v);
        fmt::format_to(o, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>"
                          "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\">{4:.4g}</text>\n",
                       x, f.top + f.height, f.top + f.height + 5, f.top + f.height + 18, v);
    }
    for (double v : ticks(f.y.lo, f.y.hi)) {
        const double y = f.py(v);
        fmt::format_to(o, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
                          "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:.4g}</text>\n",
                       f.left - 5, y, f.left, f.left - 8, y + 4, v);
    }
    fmt::format_to(o, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", f.left + f.width / 2,
                   f.top + f.height + 36, escape(x_label));
    fmt::format_to(o, "<text transform=\"translate({:.2f},{:.2f}) rotate(-90)\" text-anchor=\"middle\">{}</text></g>\n",
                   f.left - 48, f.top + f.height / 2, escape(y_label));
}

void title(std::string& s, double x, double y, const std::string& text) {
    fmt::format_to(std::back_inserter(s), "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                   x, y, escape(text));
}

void polyline(std::string& s, const Frame& f, const std::vector<std::array<double, 2>>& pts, const std::string& style) {
    auto o = std::back_inserter(s);
    fmt::format_to(o, "<polyline fill=\"none\" {} points=\"", style);
    for (const auto& [x, y] : pts) fmt::format_to(o, "{:.2f},{:.2f} ", f.px(x), f.py(y));
    s += "\"/>\n";
}

void clip(std::string& s, const std::string& id, const Frame& f) {
    fmt::format_to(std::back_inserter(s),
                   "<clipPath id=\"{}\"><rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\"/></clipPath>\n", id,
                   f.left, f.top, f.width, f.height);
}

}  // namespace

std::string render_line_plot(const LinePlot& plot) {
    double x_lo = HUGE_VAL, x_hi = -HUGE_VAL, y_lo = HUGE_VAL, y_hi = -HUGE_VAL;
    for (const auto& sr : plot.series) {
        for (double v : sr.x) x_lo = std::min(x_lo, v), x_hi = std::max(x_hi, v);
        for (double v : sr.y) y_lo = std::min(y_lo, v), y_hi = std::max(y_hi, v);
    }
    for (const auto& l : plot.lines) y_lo = std::min(y_lo, l.y), y_hi = std::max(y_hi, l.y);
    if (!(x_hi >= x_lo)) x_lo = 0.0, x_hi = 1.0;
    if (!(y_hi >= y_lo)) y_lo = 0.0, y_hi = 1.0;

    const Frame f{80, 40, 640, 360, x_hi > x_lo ? Range{x_lo, x_hi} : padded(x_lo, x_hi), padded(y_lo, y_hi)};
    std::string s;
    open_svg(s, 920, 460);
    title(s, f.left + f.width / 2, 24, plot.title);
    clip(s, "plot", f);
    axes(s, f, plot.x_label, plot.y_label);
    s += "<g clip-path=\"url(#plot)\">\n";
    for (const auto& l : plot.lines) {
        fmt::format_to(std::back_inserter(s),
                       "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-dasharray=\"6,4\"/>\n",
                       f.left, f.py(l.y), f.left + f.width, f.py(l.y), l.color);
    }
    for (const auto& sr : plot.series) {
        std::vector<std::array<double, 2>> pts;
        for (std::size_t i = 0; i < std::min(sr.x.size(), sr.y.size()); ++i) pts.push_back({sr.x[i], sr.y[i]});
        polyline(s, f, pts, fmt::format("stroke=\"{}\" stroke-width=\"1.5\"", sr.color));
    }
    s += "</g>\n";

    double ly = f.top + 14;
    auto legend = [&](const std::string& label, const std::string& color, bool dashed) {
        fmt::format_to(std::back_inserter(s),
                       "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"2\"{}/>"
                       "<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n",
                       f.left + f.width + 15, ly, f.left + f.width + 40, ly, color,
                       dashed ? " stroke-dasharray=\"6,4\"" : "", f.left + f.width + 45, ly + 4, escape(label));
        ly += 16;
    };
    for (const auto& sr : plot.series) legend(sr.label, sr.color, false);
    for (const auto& l : plot.lines) legend(l.label, l.color, true);
    s += "</svg>\n";
    return s;
}

std::string render_vector_field(const FieldPlot& plot) {
    const auto& fld = plot.field;
    const Frame f{80, 40, 560, 560, {fld.xs.front(), fld.xs.back()}, {fld.ys.front(), fld.ys.back()}};
    const double cell = std::min(f.width / static_cast<double>(fld.xs.size()),
                                 f.height / static_cast<double>(fld.ys.size()));
    double lmin = HUGE_VAL, lmax = -HUGE_VAL;
    for (const auto& v : fld.values) {
        const double mag = std::hypot(v[0], v[1]);
        if (mag > 0.0) lmin = std::min(lmin, std::log(mag)), lmax = std::max(lmax, std::log(mag));
    }

    std::string s;
    open_svg(s, 680, 660);
    title(s, f.left + f.width / 2, 24, plot.title);
    clip(s, "field", f);
    axes(s, f, plot.x_label, plot.y_label);
    s += "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"5\" markerHeight=\"5\" "
         "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"context-stroke\"/></marker></defs>\n";
    s += "<g clip-path=\"url(#field)\">\n";
    auto o = std::back_inserter(s);
    for (const auto& orbit : plot.orbits) polyline(s, f, orbit, "stroke=\"#888888\" stroke-width=\"1\"");
    for (std::size_t ix = 0; ix < fld.xs.size(); ++ix) {
        for (std::size_t iy = 0; iy < fld.ys.size(); ++iy) {
            const auto& v = fld.at(ix, iy);
            const double x = f.px(fld.xs[ix]);
            const double y = f.py(fld.ys[iy]);
            const double mag = std::hypot(v[0], v[1]);
            if (mag == 0.0) {
                fmt::format_to(o, "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2\" fill=\"black\"/>\n", x, y);
                continue;
            }
            // Direction in screen space, where the y axis points down.
            const double dx = v[0] / (fld.xs.back() - fld.xs.front()) * f.width;
            const double dy = -v[1] / (fld.ys.back() - fld.ys.front()) * f.height;
            const double norm = std::hypot(dx, dy);
            const double len = 0.4 * cell;
            const double u = lmax > lmin ? (std::log(mag) - lmin) / (lmax - lmin) : 0.5;
            fmt::format_to(o,
                           "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"1.2\" "
                           "marker-end=\"url(#head)\"/>\n",
                           x - len * dx / norm, y - len * dy / norm, x + len * dx / norm, y + len * dy / norm, viridis(u));
        }
    }
    s += "</g>\n";
    for (const auto& fp : plot.fixed_points) {
        if (!f.inside(fp.x, fp.y)) continue;
        fmt::format_to(o,
                       "<circle cx=\"{0:.2f}\" cy=\"{1:.2f}\" r=\"6\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>"
                       "<text x=\"{2:.2f}\" y=\"{3:.2f}\" fill=\"#d62728\" font-size=\"13\">{4}</text>\n",
                       f.px(fp.x), f.py(fp.y), f.px(fp.x) + 9, f.py(fp.y) - 9, escape(fp.label));
    }
    s += "</svg>\n";
    return s;
}

std::string render_wigner_figure(const WignerFigure& fig) {
    const std::size_t n = fig.panels.size();
    const std::size_t cols = std::max<std::size_t>(1, std::min(fig.columns, n));
    const std::size_t rows = (n + cols - 1) / cols;
    const double pw = 260, ph = 260, gap_x = 90, gap_y = 80;
    const double width = 60 + static_cast<double>(cols) * (pw + gap_x);
    const double height = 60 + static_cast<double>(rows) * (ph + gap_y);
    const SystemSpec& sys = fig.system;
    const double hbar = sys.hbar;

    std::string s;
    open_svg(s, width, height);
    title(s, width / 2, 26, fig.title);
    auto o = std::back_inserter(s);

    std::vector<std::array<double, 2>> energy_curve;
    if (fig.omega_ref > 0.0 && fig.energy > 0.0) {
        const double ax = std::sqrt(2.0 * fig.energy / (sys.mass * fig.omega_ref * fig.omega_ref));
        const double ap = std::sqrt(2.0 * sys.mass * fig.energy);
        for (int k = 0; k <= 180; ++k) {
            const double th = 2.0 * kPi * k / 180.0;
            energy_curve.push_back({ax * std::cos(th), ap * std::sin(th)});
        }
    }

    constexpr int kLevels = 10;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& pan = fig.panels[k];
        const double left = 80 + static_cast<double>(k % cols) * (pw + gap_x);
        const double top = 50 + static_cast<double>(k / cols) * (ph + gap_y);
        const Frame f{left, top, pw, ph, fig.x, fig.p};
        const std::string id = fmt::format("panel{}", k);
        clip(s, id, f);
        fmt::format_to(o, "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n", left, top, pw,
                       ph, viridis(0.0));
        axes(s, f, "x", "p");
        title(s, left + pw / 2, top - 8, fmt::format("t = {:.4g}", pan.t));
        fmt::format_to(o, "<g clip-path=\"url(#{})\">\n", id);

        // W / W_max = exp(-2 Q) with Q = (sp xt^2 - 2 sxp xt pt + sx pt^2) / hbar^2.
        const auto& u = pan.moments;
        const double a = u.sigma_pp / (hbar * hbar);
        const double b = -u.sigma_xp / (hbar * hbar);
        const double c = u.sigma_xx / (hbar * hbar);
        const double tr = 0.5 * (a + c);
        const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
        const double mu1 = tr + disc;
        const double mu2 = tr - disc;
        const double angle = 0.5 * std::atan2(2.0 * b, a - c);
        const double x0 = pan.centroid.eta;
        const double p0 = pan.centroid.momentum(sys.mass);
        for (int lv = 0; lv < kLevels; ++lv) {
            const double level = (lv + 0.5) / kLevels;
            const double q = -0.5 * std::log(level);
            const double r1 = std::sqrt(q / mu1);
            const double r2 = std::sqrt(q / mu2);
            s += "<polygon fill=\"" + viridis((lv + 1.0) / kLevels) + "\" points=\"";
            for (int j = 0; j < 120; ++j) {
                const double th = 2.0 * kPi * j / 120.0;
                const double e1 = r1 * std::cos(th);
                const double e2 = r2 * std::sin(th);
                const double xt = e1 * std::cos(angle) - e2 * std::sin(angle);
                const double pt = e1 * std::sin(angle) + e2 * std::cos(angle);
                fmt::format_to(o, "{:.2f},{:.2f} ", f.px(x0 + xt), f.py(p0 + pt));
            }
            s += "\"/>\n";
        }
        if (!energy_curve.empty()) {
            polyline(s, f, energy_curve, "stroke=\"white\" stroke-width=\"1.2\" stroke-dasharray=\"4,3\"");
        }
        std::vector<std::array<double, 2>> path;
        if (fig.trajectory.empty()) {
            for (std::size_t j = 0; j <= k; ++j) {
                path.push_back({fig.panels[j].centroid.eta, fig.panels[j].centroid.momentum(sys.mass)});
            }
        } else {
            for (const auto& [t, x, p] : fig.trajectory) {
                if (t > pan.t) break;
                path.push_back({x, p});
            }
            path.push_back({x0, p0});
        }
        if (path.size() > 1) polyline(s, f, path, "stroke=\"#ff7f0e\" stroke-width=\"1\"");
        fmt::format_to(o,
                       "<path d=\"M{0:.2f},{1:.2f} m-5,0 h10 m-5,-5 v10\" stroke=\"#d62728\" stroke-width=\"2\"/>\n</g>\n",
                       f.px(x0), f.py(p0));
    }
    s += "</svg>\n";
    return s;
}

}  // namespace ricdyn::app
