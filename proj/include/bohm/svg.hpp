#pragma once

// Small self-contained SVG writer for line plots, contour maps and arrow
// fields.  Output is deterministic: coordinates are printed with fixed
// precision so identical inputs give identical files.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bohm/grid.hpp"
#include "bohm/vec.hpp"

namespace bohm {

struct SvgStyle {
    std::string stroke = "#000000";
    double width = 1.0;
    std::string dash;        // stroke-dasharray, empty for solid
    std::string css_class;   // optional class attribute
    double opacity = 1.0;
};

class SvgPlot {
public:
    SvgPlot(double x_min, double x_max, double y_min, double y_max, int width_px = 720, int height_px = 480);

    void title(std::string text) { title_ = std::move(text); }
    void labels(std::string x_label, std::string y_label);

    void polyline(std::span<const double> x, std::span<const double> y, const SvgStyle& style = {});
    void marker(double x, double y, double radius_px, const std::string& fill);
    /// Iso-lines of a 2D field at each level (marching squares).
    void contours(const GridGeometry& geometry, std::span<const double> field, std::span<const double> levels,
                  const SvgStyle& style = {});
    /// Arrows from each position along the vector times `scale` (data units).
    void arrows(std::span<const Vec2> at, std::span<const Vec2> vec, double scale, const SvgStyle& style = {});
    void legend(const std::string& text, const SvgStyle& style);

    std::string str() const;
    void save(const std::filesystem::path& path) const;

private:
    double px(double x) const;
    double py(double y) const;
    static std::string attrs(const SvgStyle& style);

    double x_min_, x_max_, y_min_, y_max_;
    int width_, height_;
    std::string title_, x_label_, y_label_;
    std::vector<std::string> body_;
    std::vector<std::pair<std::string, SvgStyle>> legend_;
};

}  // namespace bohm
