// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace krb::bench {

struct PlotSeries {
  std::string label;
  std::vector<double> y;
};

/// Minimal line plot: y values against 1-based point index, one polyline
/// per series, with axes, ticks, and a legend. Non-finite samples break the
/// polyline.
void write_line_plot(const std::string &path, const std::string &title,
                     const std::string &x_label, const std::string &y_label,
                     const std::vector<PlotSeries> &series);

} // namespace krb::bench
