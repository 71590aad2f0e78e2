// Copyright 2026 The dpmf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Minimal self-contained SVG line charts: axes, ticks, one polyline per
// series with an optional min/max band, and a legend. Output depends only on
// the input numbers, so identical data gives byte-identical files.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace dpmf::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_min;  // empty, or same length as y
  std::vector<double> y_max;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  int width = 640;
  int height = 420;
};

namespace detail {

inline std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string Tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

inline std::string Escape(const std::string& s) {
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

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace detail

inline std::string render(const Chart& chart) {
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;
  const double plot_w = chart.width - kLeft - kRight;
  const double plot_h = chart.height - kTop - kBottom;

  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  auto widen = [](double v, double& lo, double& hi) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  for (const Series& s : chart.series) {
    for (double v : s.x) widen(v, x_lo, x_hi);
    for (double v : s.y) widen(v, y_lo, y_hi);
    for (double v : s.y_min) widen(v, y_lo, y_hi);
    for (double v : s.y_max) widen(v, y_lo, y_hi);
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1;
  if (!std::isfinite(y_lo)) y_lo = 0, y_hi = 1;
  if (x_hi == x_lo) x_lo -= 0.5, x_hi += 0.5;
  if (y_hi == y_lo) {
    const double pad = y_lo == 0.0 ? 0.5 : 0.05 * std::abs(y_lo);
    y_lo -= pad, y_hi += pad;
  }
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) {
    return kTop + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;
  };

  using detail::Num;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(chart.width) + "\" height=\"" +
         std::to_string(chart.height) + "\" viewBox=\"0 0 " +
         std::to_string(chart.width) + " " + std::to_string(chart.height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + Num(chart.width / 2.0) +
         "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         detail::Escape(chart.title) + "</text>\n";

  // Axes and ticks.
  out += "<g stroke=\"black\" fill=\"none\">\n";
  out += "<line x1=\"" + Num(kLeft) + "\" y1=\"" + Num(kTop + plot_h) +
         "\" x2=\"" + Num(kLeft + plot_w) + "\" y2=\"" + Num(kTop + plot_h) +
         "\"/>\n";
  out += "<line x1=\"" + Num(kLeft) + "\" y1=\"" + Num(kTop) + "\" x2=\"" +
         Num(kLeft) + "\" y2=\"" + Num(kTop + plot_h) + "\"/>\n";
  out += "</g>\n<g fill=\"black\">\n";
  constexpr int kTicks = 5;
  for (int k = 0; k <= kTicks; ++k) {
    const double xv = x_lo + (x_hi - x_lo) * k / kTicks;
    const double yv = y_lo + (y_hi - y_lo) * k / kTicks;
    out += "<text x=\"" + Num(px(xv)) + "\" y=\"" + Num(kTop + plot_h + 18) +
           "\" text-anchor=\"middle\">" + detail::Tick(xv) + "</text>\n";
    out += "<text x=\"" + Num(kLeft - 6) + "\" y=\"" + Num(py(yv) + 4) +
           "\" text-anchor=\"end\">" + detail::Tick(yv) + "</text>\n";
  }
  out += "<text x=\"" + Num(kLeft + plot_w / 2) + "\" y=\"" +
         Num(chart.height - 12.0) + "\" text-anchor=\"middle\">" +
         detail::Escape(chart.x_label) + "</text>\n";
  out += "<text transform=\"translate(16 " + Num(kTop + plot_h / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" +
         detail::Escape(chart.y_label) + "</text>\n";
  out += "</g>\n";

  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const Series& series = chart.series[s];
    const char* color = detail::kPalette[s % std::size(detail::kPalette)];
    const std::size_t n = std::min(series.x.size(), series.y.size());
    const bool band = series.y_min.size() == n && series.y_max.size() == n;
    if (band && n > 0) {
      std::string pts;
      for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(series.y_max[k])) continue;
        pts += Num(px(series.x[k])) + "," + Num(py(series.y_max[k])) + " ";
      }
      for (std::size_t k = n; k-- > 0;) {
        if (!std::isfinite(series.y_min[k])) continue;
        pts += Num(px(series.x[k])) + "," + Num(py(series.y_min[k])) + " ";
      }
      out += "<polygon points=\"" + pts + "\" fill=\"" + color +
             "\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";
    }
    std::string pts;
    for (std::size_t k = 0; k < n; ++k) {
      if (!std::isfinite(series.y[k])) continue;
      pts += Num(px(series.x[k])) + "," + Num(py(series.y[k])) + " ";
    }
    out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    for (std::size_t k = 0; k < n; ++k) {
      if (!std::isfinite(series.y[k])) continue;
      out += "<circle cx=\"" + Num(px(series.x[k])) + "\" cy=\"" +
             Num(py(series.y[k])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    const double ly = kTop + 8 + 16.0 * static_cast<double>(s);
    out += "<line x1=\"" + Num(kLeft + plot_w - 130) + "\" y1=\"" + Num(ly) +
           "\" x2=\"" + Num(kLeft + plot_w - 110) + "\" y2=\"" + Num(ly) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + Num(kLeft + plot_w - 104) + "\" y=\"" + Num(ly + 4) +
           "\">" + detail::Escape(series.name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace dpmf::svg
