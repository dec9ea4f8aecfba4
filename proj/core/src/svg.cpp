// Copyright 2026 The namepop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "namepop/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "namepop/error.hpp"

namespace namepop {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 56.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

// Fixed two-decimal pixel coordinates keep the output byte-stable across
// libc formatting differences.
std::string px(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

// Short human tick label: %g is locale-independent for C locale digits.
std::string tick_label(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
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

// Round tick positions: 1/2/5 ladder covering [lo, hi] with ~5 ticks.
std::vector<double> linear_ticks(double lo, double hi) {
  double span = hi - lo;
  if (!(span > 0)) return {lo};
  double raw_step = span / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw_step) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> ticks;
  double first = std::ceil(lo / step) * step;
  for (double t = first; t <= hi + step * 1e-9; t += step) {
    // Snap near-zero artifacts of the stepping loop to exactly zero.
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> ticks;
  int first = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
  int last = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
  for (int e = first; e <= last; ++e) ticks.push_back(std::pow(10.0, e));
  if (ticks.empty()) ticks = {lo, hi};
  return ticks;
}

}  // namespace

LineChart::LineChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void LineChart::add_series(std::string name, std::vector<std::pair<double, double>> points) {
  series_.push_back({std::move(name), std::move(points)});
}

void LineChart::render(std::ostream& out) const {
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = x_min;
  double y_max = -x_min;
  for (const Series& s : series_) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (log_x_ && !(x > 0)) continue;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (!std::isfinite(x_min)) {
    x_min = 0.0;
    x_max = 1.0;
    y_min = 0.0;
    y_max = 1.0;
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;
  // A little headroom keeps strokes off the plot border.
  double y_pad = (y_max - y_min) * 0.05;
  y_min -= y_pad;
  y_max += y_pad;

  double plot_w = kWidth - kMarginLeft - kMarginRight;
  double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto x_pos = [&](double x) {
    double t = log_x_ ? (std::log10(x) - std::log10(x_min)) / (std::log10(x_max) - std::log10(x_min))
                      : (x - x_min) / (x_max - x_min);
    return kMarginLeft + t * plot_w;
  };
  auto y_pos = [&](double y) {
    return kMarginTop + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << px(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(title_) << "</text>\n";

  // Axes.
  out << "<line x1=\"" << px(kMarginLeft) << "\" y1=\"" << px(kMarginTop) << "\" x2=\""
      << px(kMarginLeft) << "\" y2=\"" << px(kMarginTop + plot_h)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << px(kMarginLeft) << "\" y1=\"" << px(kMarginTop + plot_h) << "\" x2=\""
      << px(kMarginLeft + plot_w) << "\" y2=\"" << px(kMarginTop + plot_h)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  std::vector<double> xticks =
      log_x_ ? log_ticks(x_min, x_max) : linear_ticks(x_min, x_max);
  for (double t : xticks) {
    if (t < x_min || t > x_max) continue;
    double x = x_pos(t);
    out << "<line x1=\"" << px(x) << "\" y1=\"" << px(kMarginTop + plot_h) << "\" x2=\"" << px(x)
        << "\" y2=\"" << px(kMarginTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(x) << "\" y=\"" << px(kMarginTop + plot_h + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(t) << "</text>\n";
  }
  for (double t : linear_ticks(y_min, y_max)) {
    if (t < y_min || t > y_max) continue;
    double y = y_pos(t);
    out << "<line x1=\"" << px(kMarginLeft - 5) << "\" y1=\"" << px(y) << "\" x2=\""
        << px(kMarginLeft) << "\" y2=\"" << px(y) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(kMarginLeft - 8) << "\" y=\"" << px(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(t)
        << "</text>\n";
  }

  out << "<text x=\"" << px(kMarginLeft + plot_w / 2) << "\" y=\"" << px(kHeight - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xml_escape(x_label_) << "</text>\n";
  out << "<text x=\"18\" y=\"" << px(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << px(kMarginTop + plot_h / 2) << ")\">" << xml_escape(y_label_) << "</text>\n";

  for (size_t i = 0; i < series_.size(); ++i) {
    const Series& s = series_[i];
    const char* color = kPalette[i % kPaletteSize];
    std::string points;
    auto flush = [&]() {
      if (points.empty()) return;
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
          << points << "\"/>\n";
      points.clear();
    };
    for (const auto& [x, y] : s.points) {
      bool drawable = std::isfinite(x) && std::isfinite(y) && (!log_x_ || x > 0);
      if (!drawable) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += px(x_pos(x)) + "," + px(y_pos(y));
    }
    flush();
    // Legend row.
    double ly = kMarginTop + 8 + 16.0 * static_cast<double>(i);
    out << "<line x1=\"" << px(kMarginLeft + plot_w - 120) << "\" y1=\"" << px(ly) << "\" x2=\""
        << px(kMarginLeft + plot_w - 100) << "\" y2=\"" << px(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << px(kMarginLeft + plot_w - 94) << "\" y=\"" << px(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.name)
        << "</text>\n";
  }
  out << "</svg>\n";
}

void LineChart::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  render(out);
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace namepop
