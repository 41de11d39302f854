#pragma once

#include <array>
#include <string>
#include <vector>

#include "ricdyn/core.hpp"

namespace ricdyn::app {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
};

struct HorizontalLine {
    double y = 0.0;
    std::string label;
    std::string color;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<HorizontalLine> lines;
};

std::string render_line_plot(const LinePlot& plot);

struct FixedPoint {
    double x = 0.0;
    double y = 0.0;
    std::string label;
};

struct FieldPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    PlaneField field;
    std::vector<FixedPoint> fixed_points;
    std::vector<std::vector<std::array<double, 2>>> orbits;
};

/// Unit-length arrows coloured by log magnitude; zeros of the field drawn as dots.
std::string render_vector_field(const FieldPlot& plot);

struct WignerPanel {
    double t = 0.0;
    Centroid centroid;
    UncertaintyTriple moments;
};

struct WignerFigure {
    std::string title;
    SystemSpec system;
    double omega_ref = 0.0;            // classical energy ellipse drawn when > 0
    double energy = 0.0;
    std::vector<WignerPanel> panels;
    std::vector<std::array<double, 3>> trajectory;  // dense (t, x, p) for the peak path
    Range x{-3.0, 3.0};
    Range p{-3.0, 3.0};
    std::size_t columns = 4;
};

/// One heatmap per panel, drawn as filled level sets of the Gaussian (exact
/// ellipses), with the peak, its path so far and the classical energy ellipse.
/// Without a trajectory the path joins the panel centroids.
std::string render_wigner_figure(const WignerFigure& fig);

}  // namespace ricdyn::app
