#pragma once

#include <string>
#include <vector>

#include "plastiflow/core.hpp"

namespace plastiflow {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotStyle {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "value";
    bool log_y = false;
    int width = 640;
    int height = 400;
};

/**
 * Self-contained SVG line chart.
 *
 * Data bounds are padded by 5% on each side; the plotted data window is
 * stored in data-* attributes of the plot group so pixel coordinates can be
 * mapped back. Output depends only on the input. Throws EmptySeries.
 */
std::string emit_plot(const std::vector<PlotSeries>& series, const PlotStyle& style);

/// One curve per GridFunction (interval domains), labelled by time stamp when present.
std::string emit_plot(const std::vector<GridFunction>& profiles, const PlotStyle& style);

}  // namespace plastiflow
