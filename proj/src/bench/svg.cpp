// SPDX-License-Identifier: Apache-2.0

#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "krb/errors.hpp"

namespace krb::bench {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char *kColors[] = {"#1f6fb2", "#c0392b", "#27ae60", "#8e44ad", "#d68910", "#16a085"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

} // namespace

void write_line_plot(const std::string &path, const std::string &title,
                     const std::string &x_label, const std::string &y_label,
                     const std::vector<PlotSeries> &series) {
  std::size_t npoints = 0;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();
  for (const auto &s : series) {
    npoints = std::max(npoints, s.y.size());
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (npoints == 0 || !std::isfinite(ymin)) {
    ymin = 0.0;
    ymax = 1.0;
    npoints = std::max<std::size_t>(npoints, 1);
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double i) {
    return kLeft + (npoints == 1 ? 0.5 : i / static_cast<double>(npoints - 1)) * plot_w;
  };
  auto sy = [&](double v) { return kTop + (ymax - v) / (ymax - ymin) * plot_h; };

  std::ofstream os(path);
  if (!os) throw krb::IoError("cannot write " + path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
        "font-family=\"sans-serif\">"
     << title << "</text>\n";

  // axes
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << kTop + plot_h << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
     << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";

  // y ticks
  for (int t = 0; t <= 5; ++t) {
    const double v = ymin + (ymax - ymin) * t / 5.0;
    const double y = sy(v);
    os << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
       << y << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << num(v)
       << "</text>\n";
  }
  // x ticks (at most 10)
  const std::size_t xstep = std::max<std::size_t>(1, npoints / 10);
  for (std::size_t i = 0; i < npoints; i += xstep) {
    const double x = sx(static_cast<double>(i));
    os << "<line x1=\"" << x << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << x << "\" y2=\""
       << kTop + plot_h + 4 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << kTop + plot_h + 18
       << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << (i + 1)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << x_label
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << kTop + plot_h / 2
     << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 16 "
     << kTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char *color = kColors[s % 6];
    std::string points;
    bool open = false;
    for (std::size_t i = 0; i < series[s].y.size(); ++i) {
      const double v = series[s].y[i];
      if (!std::isfinite(v)) {
        if (open) {
          os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
             << points << "\"/>\n";
          points.clear();
          open = false;
        }
        continue;
      }
      points += num(sx(static_cast<double>(i))) + "," + num(sy(v)) + " ";
      open = true;
    }
    if (open) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
         << points << "\"/>\n";
    }
    const double ly = kTop + 16.0 * static_cast<double>(s);
    os << "<line x1=\"" << kLeft + plot_w + 14 << "\" y1=\"" << ly + 6 << "\" x2=\""
       << kLeft + plot_w + 38 << "\" y2=\"" << ly + 6 << "\" stroke=\"" << color
       << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << kLeft + plot_w + 44 << "\" y=\"" << ly + 10
       << "\" font-size=\"11\" font-family=\"sans-serif\">" << series[s].label << "</text>\n";
  }
  os << "</svg>\n";
}

} // namespace krb::bench
