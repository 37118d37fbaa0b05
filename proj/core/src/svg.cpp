#include "gnnlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace gnnlab {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string LineChart::render() const {
  const double margin_left = 64, margin_right = 150, margin_top = 36,
               margin_bottom = 48;
  double plot_w = width - margin_left - margin_right;
  double plot_h = height - margin_top - margin_bottom;

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  if (!(x_min <= x_max)) {
    x_min = 0;
    x_max = 1;
    y_min = 0;
    y_max = 1;
  }
  if (x_min == x_max) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_min == y_max) {
    y_min -= 0.5;
    y_max += 0.5;
  }

  auto sx = [&](double x) {
    return margin_left + (x - x_min) / (x_max - x_min) * plot_w;
  };
  auto sy = [&](double y) {
    return margin_top + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";

  // Axes.
  out << "<line x1=\"" << num(margin_left) << "\" y1=\"" << num(margin_top)
      << "\" x2=\"" << num(margin_left) << "\" y2=\""
      << num(margin_top + plot_h) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << num(margin_left) << "\" y1=\""
      << num(margin_top + plot_h) << "\" x2=\"" << num(margin_left + plot_w)
      << "\" y2=\"" << num(margin_top + plot_h) << "\" stroke=\"black\"/>\n";

  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    double fx = x_min + (x_max - x_min) * t / ticks;
    double fy = y_min + (y_max - y_min) * t / ticks;
    out << "<line x1=\"" << num(sx(fx)) << "\" y1=\"" << num(margin_top + plot_h)
        << "\" x2=\"" << num(sx(fx)) << "\" y2=\""
        << num(margin_top + plot_h + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(sx(fx)) << "\" y=\""
        << num(margin_top + plot_h + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\">"
        << num(fx) << "</text>\n";
    out << "<line x1=\"" << num(margin_left - 5) << "\" y1=\"" << num(sy(fy))
        << "\" x2=\"" << num(margin_left) << "\" y2=\"" << num(sy(fy))
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(margin_left - 8) << "\" y=\"" << num(sy(fy) + 3)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << num(fy) << "</text>\n";
  }

  out << "<text x=\"" << num(margin_left + plot_w / 2) << "\" y=\""
      << num(static_cast<double>(height) - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << num(margin_top + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 "
      << num(margin_top + plot_h / 2) << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::ostringstream pts;
    for (auto [x, y] : series[s].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      pts << num(sx(x)) << "," << num(sy(y)) << " ";
    }
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    for (auto [x, y] : series[s].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      out << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y))
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    double ly = margin_top + 14 + 16 * static_cast<double>(s);
    out << "<line x1=\"" << num(margin_left + plot_w + 10) << "\" y1=\""
        << num(ly - 4) << "\" x2=\"" << num(margin_left + plot_w + 30)
        << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << num(margin_left + plot_w + 34) << "\" y=\"" << num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].name
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace gnnlab
