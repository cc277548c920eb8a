#include "bohm/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bohm/errors.hpp"

namespace bohm {

namespace {

constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

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

std::vector<double> nice_ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) ticks.push_back(t);
    return ticks;
}

}  // namespace

SvgPlot::SvgPlot(double x_min, double x_max, double y_min, double y_max, int width_px, int height_px)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), width_(width_px), height_(height_px) {
    if (!(x_max > x_min) || !(y_max > y_min)) throw InvalidParameter("empty plot range");
}

void SvgPlot::labels(std::string x_label, std::string y_label) {
    x_label_ = std::move(x_label);
    y_label_ = std::move(y_label);
}

double SvgPlot::px(double x) const { return kLeft + (x - x_min_) / (x_max_ - x_min_) * (width_ - kLeft - kRight); }
double SvgPlot::py(double y) const {
    return height_ - kBottom - (y - y_min_) / (y_max_ - y_min_) * (height_ - kTop - kBottom);
}

std::string SvgPlot::attrs(const SvgStyle& s) {
    std::string a = " fill=\"none\" stroke=\"" + s.stroke + "\" stroke-width=\"" + fmt(s.width) + "\"";
    if (!s.dash.empty()) a += " stroke-dasharray=\"" + s.dash + "\"";
    if (s.opacity < 1.0) a += " stroke-opacity=\"" + fmt(s.opacity) + "\"";
    if (!s.css_class.empty()) a += " class=\"" + s.css_class + "\"";
    return a;
}

void SvgPlot::polyline(std::span<const double> x, std::span<const double> y, const SvgStyle& style) {
    if (x.size() != y.size()) throw InvalidParameter("polyline coordinates differ in length");
    // Split at non-finite samples (e.g. trajectories that stopped).
    std::string pts;
    auto flush = [&] {
        if (!pts.empty()) body_.push_back("<polyline points=\"" + pts + "\"" + attrs(style) + "/>");
        pts.clear();
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            flush();
            continue;
        }
        if (!pts.empty()) pts += ' ';
        pts += fmt(px(x[i])) + "," + fmt(py(y[i]));
    }
    flush();
}

void SvgPlot::marker(double x, double y, double radius_px, const std::string& fill) {
    body_.push_back("<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"" + fmt(radius_px) +
                    "\" fill=\"" + fill + "\"/>");
}

void SvgPlot::contours(const GridGeometry& g, std::span<const double> field, std::span<const double> levels,
                       const SvgStyle& style) {
    if (g.dimension != 2 || field.size() != g.size()) throw InvalidParameter("contours need a 2D field");
    const std::size_t nx = g.points[0], ny = g.points[1];
    for (double level : levels) {
        std::string d;
        auto seg = [&](Vec2 a, Vec2 b) {
            d += "M" + fmt(px(a.x)) + "," + fmt(py(a.y)) + "L" + fmt(px(b.x)) + "," + fmt(py(b.y));
        };
        for (std::size_t ix = 0; ix + 1 < nx; ++ix)
            for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
                const double x0 = g.coordinate(0, ix), x1 = g.coordinate(0, ix + 1);
                const double y0 = g.coordinate(1, iy), y1 = g.coordinate(1, iy + 1);
                // Corners counter-clockwise from (x0, y0).
                const double v[4] = {field[g.index(ix, iy)], field[g.index(ix + 1, iy)],
                                     field[g.index(ix + 1, iy + 1)], field[g.index(ix, iy + 1)]};
                const Vec2 p[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
                int code = 0;
                for (int k = 0; k < 4; ++k)
                    if (v[k] >= level) code |= 1 << k;
                if (code == 0 || code == 15) continue;
                auto edge = [&](int k) {
                    const int m = (k + 1) % 4;
                    const double f = (level - v[k]) / (v[m] - v[k]);
                    return p[k] + f * (p[m] - p[k]);
                };
                std::vector<int> crossing;
                for (int k = 0; k < 4; ++k)
                    if (((code >> k) & 1) != ((code >> ((k + 1) % 4)) & 1)) crossing.push_back(k);
                if (crossing.size() == 2) {
                    seg(edge(crossing[0]), edge(crossing[1]));
                } else {
                    // Saddle: connect according to the cell-center value.
                    const bool center_high = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= level;
                    const bool c0_high = (code & 1) != 0;
                    if (center_high == c0_high) {
                        seg(edge(0), edge(1));
                        seg(edge(2), edge(3));
                    } else {
                        seg(edge(3), edge(0));
                        seg(edge(1), edge(2));
                    }
                }
            }
        if (!d.empty()) body_.push_back("<path d=\"" + d + "\"" + attrs(style) + "/>");
    }
}

void SvgPlot::arrows(std::span<const Vec2> at, std::span<const Vec2> vec, double scale, const SvgStyle& style) {
    if (at.size() != vec.size()) throw InvalidParameter("arrow positions and vectors differ in length");
    std::string d;
    for (std::size_t i = 0; i < at.size(); ++i) {
        const Vec2 tip = at[i] + scale * vec[i];
        const double ax = px(at[i].x), ay = py(at[i].y), bx = px(tip.x), by = py(tip.y);
        const double len = std::hypot(bx - ax, by - ay);
        if (!(len > 0.5) || !std::isfinite(len)) continue;
        const double ux = (bx - ax) / len, uy = (by - ay) / len;
        const double head = std::min(4.0, 0.35 * len);
        d += "M" + fmt(ax) + "," + fmt(ay) + "L" + fmt(bx) + "," + fmt(by);
        d += "M" + fmt(bx - head * (ux - 0.5 * uy)) + "," + fmt(by - head * (uy + 0.5 * ux)) + "L" + fmt(bx) + "," +
             fmt(by) + "L" + fmt(bx - head * (ux + 0.5 * uy)) + "," + fmt(by - head * (uy - 0.5 * ux));
    }
    if (!d.empty()) body_.push_back("<path d=\"" + d + "\"" + attrs(style) + "/>");
}

void SvgPlot::legend(const std::string& text, const SvgStyle& style) { legend_.emplace_back(text, style); }

std::string SvgPlot::str() const {
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width_) + "\" height=\"" +
         std::to_string(height_) + "\" viewBox=\"0 0 " + std::to_string(width_) + " " + std::to_string(height_) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    const double l = kLeft, r = width_ - kRight, t = kTop, b = height_ - kBottom;
    s += "<defs><clipPath id=\"plot\"><rect x=\"" + fmt(l) + "\" y=\"" + fmt(t) + "\" width=\"" + fmt(r - l) +
         "\" height=\"" + fmt(b - t) + "\"/></clipPath></defs>\n";
    s += "<rect x=\"" + fmt(l) + "\" y=\"" + fmt(t) + "\" width=\"" + fmt(r - l) + "\" height=\"" + fmt(b - t) +
         "\" fill=\"none\" stroke=\"#000000\"/>\n";
    for (double v : nice_ticks(x_min_, x_max_)) {
        const double x = px(v);
        s += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(b) + "\" x2=\"" + fmt(x) + "\" y2=\"" + fmt(b + 5) +
             "\" stroke=\"#000000\"/>";
        s += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(b + 18) + "\" text-anchor=\"middle\">" + tick_label(v) +
             "</text>\n";
    }
    for (double v : nice_ticks(y_min_, y_max_)) {
        const double y = py(v);
        s += "<line x1=\"" + fmt(l - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(l) + "\" y2=\"" + fmt(y) +
             "\" stroke=\"#000000\"/>";
        s += "<text x=\"" + fmt(l - 8) + "\" y=\"" + fmt(y + 4) + "\" text-anchor=\"end\">" + tick_label(v) +
             "</text>\n";
    }
    if (!title_.empty())
        s += "<text x=\"" + fmt(0.5 * (l + r)) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
             escape(title_) + "</text>\n";
    if (!x_label_.empty())
        s += "<text x=\"" + fmt(0.5 * (l + r)) + "\" y=\"" + fmt(height_ - 12.0) + "\" text-anchor=\"middle\">" +
             escape(x_label_) + "</text>\n";
    if (!y_label_.empty())
        s += "<text x=\"16\" y=\"" + fmt(0.5 * (t + b)) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
             fmt(0.5 * (t + b)) + ")\">" + escape(y_label_) + "</text>\n";
    s += "<g clip-path=\"url(#plot)\">\n";
    for (const auto& e : body_) s += e + "\n";
    s += "</g>\n";
    double ly = t + 16.0;
    for (const auto& [text, style] : legend_) {
        s += "<line x1=\"" + fmt(r - 150) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" + fmt(r - 120) + "\" y2=\"" +
             fmt(ly - 4) + "\"" + attrs(style) + "/>";
        s += "<text x=\"" + fmt(r - 114) + "\" y=\"" + fmt(ly) + "\">" + escape(text) + "</text>\n";
        ly += 16.0;
    }
    s += "</svg>\n";
    return s;
}

void SvgPlot::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << str();
}

}  // namespace bohm
