#include "gfwopt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gfwopt::svg {

namespace {

constexpr double kWidth = 860.0, kHeight = 520.0;
constexpr double kLeft = 70.0, kRight = 30.0, kTop = 24.0, kBottom = 52.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const std::string& x_label,
                       const std::string& y_label) {
  if (series.empty()) throw EmptySeriesError("render_svg: no series");
  for (const Series& s : series)
    if (s.points.size() < 2)
      throw EmptySeriesError("render_svg: series '" + s.name + "' has fewer than 2 points");

  double xmin = series[0].points[0].first, xmax = xmin;
  double ymin = series[0].points[0].second, ymax = ymin;
  for (const Series& s : series)
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmax == xmin) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  if (ymax == ymin) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return kHeight - kBottom - (y - ymin) / (ymax - ymin) * plot_h; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
       num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes frame and ticks.
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(plot_w) +
       "\" height=\"" + num(plot_h) + "\" fill=\"none\" stroke=\"#333333\"/>\n";
  const int nticks = 5;
  for (int t = 0; t <= nticks; ++t) {
    const double fx = xmin + (xmax - xmin) * t / nticks;
    const double fy = ymin + (ymax - ymin) * t / nticks;
    const double gx = px(fx), gy = py(fy);
    s += "<line x1=\"" + num(gx) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" + num(gx) +
         "\" y2=\"" + num(kHeight - kBottom + 6) + "\" stroke=\"#333333\"/>\n";
    s += "<text x=\"" + num(gx) + "\" y=\"" + num(kHeight - kBottom + 20) +
         "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">" + num(fx) +
         "</text>\n";
    s += "<line x1=\"" + num(kLeft - 6) + "\" y1=\"" + num(gy) + "\" x2=\"" + num(kLeft) +
         "\" y2=\"" + num(gy) + "\" stroke=\"#333333\"/>\n";
    s += "<text x=\"" + num(kLeft - 10) + "\" y=\"" + num(gy + 4) +
         "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">" + num(fy) +
         "</text>\n";
  }
  s += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 12) +
       "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
       escape(x_label) + "</text>\n";
  s += "<text x=\"18\" y=\"" + num(kTop + plot_h / 2) +
       "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\" transform=\"rotate(-90 18 " +
       num(kTop + plot_h / 2) + ")\">" + escape(y_label) + "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    s += "<polyline fill=\"none\" stroke=\"";
    s += color;
    s += "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series[i].points) {
      s += num(px(x));
      s += ',';
      s += num(py(y));
      s += ' ';
    }
    s += "\"/>\n";
  }

  // Legend, top-right inside the frame.
  const double lx = kLeft + plot_w - 170.0;
  double ly = kTop + 14.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    s += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 24) +
         "\" y2=\"" + num(ly - 4) + "\" stroke=\"";
    s += color;
    s += "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly) +
         "\" font-size=\"12\" font-family=\"sans-serif\">" + escape(series[i].name) +
         "</text>\n";
    ly += 18.0;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace gfwopt::svg
