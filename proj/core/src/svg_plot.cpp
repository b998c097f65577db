// Copyright 2026 The btfuzz Authors.
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

#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace btfuzz::svg {

namespace {

std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
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

}  // namespace

std::string number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

Canvas::Canvas(double width, double height) : width_(width), height_(height) {}

void Canvas::line(double x1, double y1, double x2, double y2, std::string_view stroke,
                  double width) {
  body_ += "<line x1=\"" + number(x1) + "\" y1=\"" + number(y1) + "\" x2=\"" + number(x2) +
           "\" y2=\"" + number(y2) + "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" +
           number(width) + "\"/>\n";
}

void Canvas::circle(double cx, double cy, double r, std::string_view fill, double opacity) {
  body_ += "<circle cx=\"" + number(cx) + "\" cy=\"" + number(cy) + "\" r=\"" + number(r) +
           "\" fill=\"" + std::string(fill) + "\" fill-opacity=\"" + number(opacity) + "\"/>\n";
}

void Canvas::rect(double x, double y, double w, double h, std::string_view fill,
                  std::string_view stroke) {
  body_ += "<rect x=\"" + number(x) + "\" y=\"" + number(y) + "\" width=\"" + number(w) +
           "\" height=\"" + number(h) + "\" fill=\"" + std::string(fill) + "\" stroke=\"" +
           std::string(stroke) + "\"/>\n";
}

void Canvas::text(double x, double y, std::string_view content, double size,
                  std::string_view anchor) {
  body_ += "<text x=\"" + number(x) + "\" y=\"" + number(y) + "\" font-size=\"" + number(size) +
           "\" font-family=\"sans-serif\" text-anchor=\"" + std::string(anchor) + "\">" +
           escape(content) + "</text>\n";
}

std::string Canvas::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + number(width_) + "\" height=\"" +
         number(height_) + "\" viewBox=\"0 0 " + number(width_) + " " + number(height_) +
         "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
}

std::string diverging(double value) {
  const double v = std::clamp(value, -1.0, 1.0);
  int r = 255;
  int g = 255;
  int b = 255;
  if (v >= 0.0) {
    g = static_cast<int>(std::lround(255.0 * (1.0 - v)));
    b = g;
  } else {
    r = static_cast<int>(std::lround(255.0 * (1.0 + v)));
    g = r;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace btfuzz::svg
