#pragma once

// Minimal static SVG line charts. Geometry depends only on the data, so the
// same series always produce the same bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace qring::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  int width = 800;
  int height = 500;
};

namespace detail {

inline std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string render(const Chart& chart) {
  using detail::fmt;
  constexpr double left = 70, right = 20, top = 40, bottom = 50;
  const double w = chart.width, h = chart.height;
  const double pw = w - left - right, ph = h - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : chart.series) {
    for (double v : s.x) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
    for (double v : s.y) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto sx = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double v) { return top + (ymax - v) / (ymax - ymin) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(chart.width) + "\" height=\"" +
         std::to_string(chart.height) + "\" viewBox=\"0 0 " + std::to_string(chart.width) + " " +
         std::to_string(chart.height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt("%.1f", w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + detail::escape(chart.title) + "</text>\n";

  // axes box
  out += "<rect x=\"" + fmt("%.1f", left) + "\" y=\"" + fmt("%.1f", top) + "\" width=\"" + fmt("%.1f", pw) +
         "\" height=\"" + fmt("%.1f", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  constexpr int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double xv = xmin + (xmax - xmin) * i / ticks;
    const double yv = ymin + (ymax - ymin) * i / ticks;
    const double px = sx(xv), py = sy(yv);
    out += "<line x1=\"" + fmt("%.2f", px) + "\" y1=\"" + fmt("%.2f", top + ph) + "\" x2=\"" + fmt("%.2f", px) +
           "\" y2=\"" + fmt("%.2f", top + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt("%.2f", px) + "\" y=\"" + fmt("%.2f", top + ph + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + fmt("%.4g", xv) + "</text>\n";
    out += "<line x1=\"" + fmt("%.2f", left - 5) + "\" y1=\"" + fmt("%.2f", py) + "\" x2=\"" + fmt("%.2f", left) +
           "\" y2=\"" + fmt("%.2f", py) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt("%.2f", left - 8) + "\" y=\"" + fmt("%.2f", py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt("%.4g", yv) + "</text>\n";
  }
  if (ymin < 0 && ymax > 0)
    out += "<line x1=\"" + fmt("%.2f", left) + "\" y1=\"" + fmt("%.2f", sy(0)) + "\" x2=\"" +
           fmt("%.2f", left + pw) + "\" y2=\"" + fmt("%.2f", sy(0)) + "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";

  out += "<text x=\"" + fmt("%.1f", left + pw / 2) + "\" y=\"" + fmt("%.1f", h - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + detail::escape(chart.x_label) +
         "</text>\n";
  out += "<text x=\"16\" y=\"" + fmt("%.1f", top + ph / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 16 " + fmt("%.1f", top + ph / 2) + ")\">" +
         detail::escape(chart.y_label) + "</text>\n";

  for (std::size_t si = 0; si < chart.series.size(); ++si) {
    const auto& s = chart.series[si];
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.2\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (k) out += ' ';
      out += fmt("%.2f", sx(s.x[k])) + "," + fmt("%.2f", sy(s.y[k]));
    }
    out += "\"/>\n";
    const double ly = top + 14 + 16 * static_cast<double>(si);
    out += "<text x=\"" + fmt("%.1f", left + pw - 8) + "\" y=\"" + fmt("%.1f", ly) + "\" text-anchor=\"end\" "
           "font-family=\"sans-serif\" font-size=\"12\" fill=\"" + s.color + "\">" + detail::escape(s.label) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace qring::svg
